"""Countable ordinals below epsilon_0 in Cantor normal form.

Only the operations needed by rank computation are provided: comparison,
successor, maximum and the supremum of an affine sequence.  Values are
immutable and hashable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Union

__all__ = [
    "Ordinal",
    "BELOW_ZERO",
    "ZERO",
    "ONE",
    "OMEGA",
    "compare",
    "succ",
    "pred",
    "sup_affine",
    "omax",
    "parse_ordinal",
]


class OrdinalError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """CNF ordinal: ``terms`` is a tuple of (exponent, coefficient) pairs.

    Exponents are strictly decreasing, coefficients positive; the empty
    tuple is 0.  ``below_zero`` marks the single sentinel value that sorts
    under 0 (the rank assigned to sets outside a tree).
    """

    terms: tuple = ()
    below_zero: bool = False

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal) or exp.below_zero:
                raise OrdinalError(f"bad exponent {exp!r}")
            if not isinstance(coeff, int) or coeff < 1:
                raise OrdinalError(f"coefficient must be a positive int, got {coeff!r}")
            if prev is not None and _cmp(exp, prev) >= 0:
                raise OrdinalError("exponents must be strictly decreasing")
            prev = exp
        if self.below_zero and self.terms:
            raise OrdinalError("BELOW_ZERO carries no terms")

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("negative ordinal")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exp: "Ordinal | int", coeff: int = 1) -> "Ordinal":
        if isinstance(exp, int):
            exp = cls.finite(exp)
        return cls(((exp, coeff),))

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.below_zero

    @property
    def is_finite(self) -> bool:
        return not self.below_zero and all(e.is_zero for e, _ in self.terms)

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    def finite_value(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def finite_tail(self) -> int:
        """Coefficient of omega^0, i.e. the trailing natural number."""
        if self.terms and self.terms[-1][0].is_zero:
            return self.terms[-1][1]
        return 0

    def depth(self) -> int:
        """Nesting depth of the exponent tower."""
        if not self.terms:
            return 0
        return 1 + max(e.depth() for e, _ in self.terms)

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _cmp(self, other) < 0

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms and self.below_zero == other.below_zero

    def __hash__(self):
        return hash((self.terms, self.below_zero))

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Ordinal({to_text(self)!r})"

    def to_json(self):
        """Array of [exponent, coefficient] pairs; finite exponents are ints."""
        if self.below_zero:
            return None
        return [[_exp_json(e), c] for e, c in self.terms]

    @classmethod
    def from_json(cls, data) -> "Ordinal":
        if data is None:
            return BELOW_ZERO
        if isinstance(data, int):
            return cls.finite(data)
        terms = []
        for exp, coeff in data:
            e = cls.finite(exp) if isinstance(exp, int) else cls.from_json(exp)
            terms.append((e, int(coeff)))
        return cls(tuple(terms))


def _exp_json(e: Ordinal):
    return e.finite_value() if e.is_finite else e.to_json()


def _coerce(x):
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.finite(x) if x >= 0 else BELOW_ZERO
    return NotImplemented


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a.below_zero or b.below_zero:
        return (not a.below_zero) - (not b.below_zero)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


ZERO = Ordinal()
BELOW_ZERO = Ordinal(below_zero=True)
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


Comparable = Union[Ordinal, int]


def compare(a: Comparable, b: Comparable) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return _cmp(_coerce(a), _coerce(b))


def succ(a: Comparable) -> Ordinal:
    a = _coerce(a)
    if a.below_zero:
        return ZERO
    if a.is_successor:
        *head, (e, c) = a.terms
        return Ordinal(tuple(head) + ((e, c + 1),))
    return Ordinal(a.terms + ((ZERO, 1),))


def pred(a: Comparable) -> Ordinal:
    """Predecessor of a successor ordinal."""
    a = _coerce(a)
    if not a.is_successor:
        raise OrdinalError(f"{a} has no predecessor")
    *head, (e, c) = a.terms
    return Ordinal(tuple(head) + (((e, c - 1),) if c > 1 else ()))


def sup_affine(a: int, b: int) -> Ordinal:
    """sup { a*n + b + 1 : n in omega }."""
    if a < 0 or b < 0:
        raise OrdinalError("sup_affine takes naturals")
    return OMEGA if a > 0 else Ordinal.finite(b + 1)


def omax(*xs: Comparable) -> Ordinal:
    if not xs:
        return BELOW_ZERO
    best = _coerce(xs[0])
    for x in xs[1:]:
        x = _coerce(x)
        if _cmp(x, best) > 0:
            best = x
    return best


# text form --------------------------------------------------------------

def to_text(a: Ordinal) -> str:
    if a.below_zero:
        return "-1"
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero:
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite:
            base = f"w^{e.finite_value()}"
        else:
            base = f"w^({to_text(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(w|\d+|[()+*^-])")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``w^k*c + ... + n``; exponents may be parenthesised ordinals."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OrdinalError(f"cannot parse ordinal at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    if tokens == ["-", "1"]:
        return BELOW_ZERO
    value, rest = _parse_sum(tokens)
    if rest:
        raise OrdinalError(f"trailing input in ordinal {text!r}")
    return value


def _parse_sum(tokens):
    terms = []
    while True:
        term, tokens = _parse_term(tokens)
        terms.append(term)
        if tokens and tokens[0] == "+":
            tokens = tokens[1:]
            continue
        break
    merged = []
    for e, c in terms:
        if merged and merged[-1][0] == e:
            merged[-1] = (e, merged[-1][1] + c)
        else:
            merged.append((e, c))
    merged = [(e, c) for e, c in merged if c > 0]
    return Ordinal(tuple(merged)), tokens


def _parse_term(tokens):
    if not tokens:
        raise OrdinalError("unexpected end of ordinal")
    tok = tokens[0]
    if tok.isdigit():
        return (ZERO, int(tok)), tokens[1:]
    if tok != "w":
        raise OrdinalError(f"unexpected token {tok!r}")
    tokens = tokens[1:]
    exp = ONE
    if tokens and tokens[0] == "^":
        tokens = tokens[1:]
        if tokens and tokens[0] == "(":
            exp, tokens = _parse_sum(tokens[1:])
            if not tokens or tokens[0] != ")":
                raise OrdinalError("unbalanced parenthesis")
            tokens = tokens[1:]
        elif tokens and tokens[0].isdigit():
            exp = Ordinal.finite(int(tokens[0]))
            tokens = tokens[1:]
        else:
            raise OrdinalError("bad exponent")
    coeff = 1
    if tokens and tokens[0] == "*":
        if len(tokens) < 2 or not tokens[1].isdigit():
            raise OrdinalError("bad coefficient")
        coeff = int(tokens[1])
        tokens = tokens[2:]
    if exp.is_zero:
        return (ZERO, coeff), tokens
    return (exp, coeff), tokens
