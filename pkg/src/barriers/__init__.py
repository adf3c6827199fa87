"""Nash-Williams barriers on omega: ranks, Ramsey searches, double arrows
and Hechler-tree machinery for the ideals FIN^B and G_c(B)."""

from .ordinal import Ordinal, OMEGA, ZERO, BELOW_ZERO, parse_ordinal
from .sets import SetDescriptor, Window, omega, evens, odds
from .barrier import (
    Uniform,
    Schreier,
    Glue,
    Restrict,
    Shift,
    Cons,
    OMEGA_PLUS_ONE,
    parse_code,
    to_text,
    rank,
    node_rank,
    contains,
    tree_contains,
)

__version__ = "0.1.0"
