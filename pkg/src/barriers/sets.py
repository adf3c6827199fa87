"""Finitely presented subsets of omega and the window that bounds searches.

A :class:`SetDescriptor` is an explicit increasing prefix followed by a
cofinite, arithmetic or empty tail.  Finite sets of naturals are carried
around as sorted tuples throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, islice
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Tail",
    "SetDescriptor",
    "Window",
    "Exhausted",
    "EmptyResult",
    "omega",
    "evens",
    "odds",
    "cofinite",
    "finite_set",
    "as_set",
    "thin",
]


class Exhausted(ValueError):
    """A finite descriptor ran out of elements."""


class EmptyResult(ValueError):
    """A thinning produced no element."""


def as_set(s: Iterable[int]) -> tuple:
    """Normalise to a strictly increasing tuple; duplicates are rejected."""
    t = tuple(sorted(int(x) for x in s))
    if any(a == b for a, b in zip(t, t[1:])):
        raise ValueError(f"repeated element in {s!r}")
    if t and t[0] < 0:
        raise ValueError("sets of naturals only")
    return t


@dataclass(frozen=True)
class Tail:
    kind: str  # "cofinite" | "arithmetic" | "empty"
    start: int = 0
    step: int = 1

    def __post_init__(self):
        if self.kind not in ("cofinite", "arithmetic", "empty"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "arithmetic" and self.step < 1:
            raise ValueError("arithmetic step must be positive")
        if self.kind != "arithmetic":
            object.__setattr__(self, "step", 1)
        if self.kind == "empty":
            object.__setattr__(self, "start", 0)
        if self.start < 0:
            raise ValueError("tail start must be a natural")

    def contains(self, n: int) -> bool:
        if self.kind == "empty" or n < self.start:
            return False
        if self.kind == "cofinite":
            return True
        return (n - self.start) % self.step == 0

    def first_at_least(self, n: int):
        if self.kind == "empty":
            return None
        if n <= self.start:
            return self.start
        if self.kind == "cofinite":
            return n
        q, r = divmod(n - self.start, self.step)
        return self.start + (q + (r > 0)) * self.step

    def to_json(self):
        if self.kind == "empty":
            return {"kind": "empty"}
        if self.kind == "cofinite":
            return {"kind": "cofinite", "from": self.start}
        return {"kind": "arithmetic", "start": self.start, "step": self.step}


@dataclass(frozen=True)
class SetDescriptor:
    prefix: tuple = ()
    tail: Tail = field(default_factory=lambda: Tail("cofinite", 0))

    def __post_init__(self):
        p = tuple(self.prefix)
        object.__setattr__(self, "prefix", p)
        if any(a >= b for a, b in zip(p, p[1:])):
            raise ValueError("prefix must be strictly increasing")
        if p and p[0] < 0:
            raise ValueError("prefix must be naturals")
        if p and self.tail.kind != "empty" and self.tail.start <= p[-1]:
            raise ValueError("tail must start above the prefix")

    @property
    def is_infinite(self) -> bool:
        return self.tail.kind != "empty"

    def contains(self, n: int) -> bool:
        if self.prefix and n <= self.prefix[-1]:
            return n in self.prefix
        return self.tail.contains(n)

    __contains__ = contains

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        if self.tail.kind == "cofinite":
            yield from count(self.tail.start)
        elif self.tail.kind == "arithmetic":
            yield from count(self.tail.start, self.tail.step)

    def enumerate(self, n: int) -> tuple:
        out = tuple(islice(iter(self), n))
        if len(out) < n:
            raise Exhausted(f"descriptor has only {len(out)} elements")
        return out

    def below(self, bound: int) -> tuple:
        """All members smaller than ``bound``."""
        out = []
        for x in self:
            if x >= bound:
                break
            out.append(x)
        return tuple(out)

    def above(self, n: int) -> "SetDescriptor":
        """The members strictly greater than ``n``."""
        prefix = tuple(x for x in self.prefix if x > n)
        if self.tail.kind == "empty":
            return SetDescriptor(prefix, self.tail)
        start = self.tail.first_at_least(n + 1)
        return SetDescriptor(prefix, Tail(self.tail.kind, start, self.tail.step))

    def to_json(self):
        return {"prefix": list(self.prefix), "tail": self.tail.to_json()}

    @classmethod
    def from_json(cls, data) -> "SetDescriptor":
        t = data.get("tail", {"kind": "cofinite", "from": 0})
        kind = t["kind"]
        if kind == "cofinite":
            tail = Tail("cofinite", t.get("from", 0))
        elif kind == "arithmetic":
            tail = Tail("arithmetic", t["start"], t["step"])
        else:
            tail = Tail("empty")
        return cls(tuple(data.get("prefix", ())), tail)

    def __str__(self):
        head = ",".join(map(str, self.prefix))
        if self.tail.kind == "empty":
            return "{" + head + "}"
        if self.tail.kind == "cofinite":
            rest = f"{self.tail.start},{self.tail.start + 1},..."
        else:
            rest = f"{self.tail.start},{self.tail.start + self.tail.step},..."
        return "{" + (head + "," if head else "") + rest + "}"


def omega() -> SetDescriptor:
    return SetDescriptor((), Tail("cofinite", 0))


def evens() -> SetDescriptor:
    return SetDescriptor((), Tail("arithmetic", 0, 2))


def odds() -> SetDescriptor:
    return SetDescriptor((), Tail("arithmetic", 1, 2))


def cofinite(start: int) -> SetDescriptor:
    return SetDescriptor((), Tail("cofinite", start))


def finite_set(elements: Iterable[int]) -> SetDescriptor:
    return SetDescriptor(as_set(elements), Tail("empty"))


@dataclass(frozen=True)
class Window:
    """Desk-scale truncation: elements below ``bound``, sets up to ``depth``."""

    bound: int
    depth: int = 0

    def __post_init__(self):
        if self.depth == 0:
            object.__setattr__(self, "depth", self.bound)
        if self.bound < 1 or self.depth < 1:
            raise ValueError("window bound and depth must be positive")

    def range(self) -> range:
        return range(self.bound)


def interval_index(breakpoints: Sequence[int], n: int) -> int:
    """Index i with n in [k_i, k_{i+1}); -1 below k_0, last index above."""
    lo, hi = 0, len(breakpoints)
    while lo < hi:
        mid = (lo + hi) // 2
        if breakpoints[mid] <= n:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def thin(d: SetDescriptor, breakpoints: Sequence[int], parity: str, w: Window) -> tuple:
    """Greedy one-point-per-interval thinning of ``d`` below ``w.bound``.

    Intervals are [k_i, k_{i+1}) with the last one unbounded.  Only
    intervals whose index has the requested parity may be hit; the smallest
    member of each such interval is kept.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    ks = list(breakpoints)
    if any(a >= b for a, b in zip(ks, ks[1:])):
        raise ValueError("breakpoints must be strictly increasing")
    want = 0 if parity == "even" else 1
    out = []
    used = set()
    for x in d.below(w.bound):
        i = interval_index(ks, x)
        if i < 0 or i % 2 != want or i in used:
            continue
        used.add(i)
        out.append(x)
    if not out:
        raise EmptyResult("no element survives thinning")
    return tuple(out)
