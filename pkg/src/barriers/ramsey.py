"""Colourings of barriers and window-bounded monochromatic searches."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Optional, Sequence

from .barrier import (
    Code,
    Verdict,
    PASS,
    Fail,
    elements,
    elements_on,
    is_eps,
    is_uniform,
    rank,
    step,
)
from .sets import Window, as_set

MAX_ARITY = 16


class RamseyError(ValueError):
    pass


class NotFoundInWindow(RamseyError):
    pass


class ShortElement(RamseyError):
    pass


class ColoringUndefined(RamseyError):
    pass


# colourings -------------------------------------------------------------


def _hash_color(seed, s: tuple, arity: int) -> int:
    h = hashlib.blake2b(f"{seed}:{','.join(map(str, s))}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") % arity


_NAMED = {
    "parity-of-sum": lambda s: sum(s) % 2,
    "sum-even": lambda s: int(sum(s) % 2 == 0),
    "min-mod-2": lambda s: (s[0] % 2) if s else 0,
}


@dataclass(frozen=True)
class Coloring:
    """A colouring by named rule, by explicit table, or as a lift.

    Rules: ``parity-of-sum``, ``sum-even``, ``min-mod-2``, ``constant-<c>``,
    ``random:<seed>`` and ``lift`` (colour of the two least elements under
    ``inner``).
    """

    arity: int = 2
    rule: Optional[str] = None
    table: Optional[tuple] = None
    inner: Optional["Coloring"] = None

    def __post_init__(self):
        if not 2 <= self.arity <= MAX_ARITY:
            raise RamseyError(f"arity must lie in 2..{MAX_ARITY}")
        if (self.rule is None) == (self.table is None):
            raise RamseyError("give exactly one of rule or table")
        if self.table is not None:
            object.__setattr__(
                self, "table", tuple(sorted((as_set(s), int(c)) for s, c in self.table))
            )
            for _, c in self.table:
                if not 0 <= c < self.arity:
                    raise RamseyError(f"colour {c} outside 0..{self.arity - 1}")
        else:
            self._resolve()  # validate eagerly

    def _resolve(self) -> Callable[[tuple], int]:
        r = self.rule
        if r in _NAMED:
            return _NAMED[r]
        if r.startswith("constant-"):
            c = int(r.split("-", 1)[1])
            if not 0 <= c < self.arity:
                raise RamseyError("constant colour out of range")
            return lambda s: c
        if r.startswith("random:"):
            seed = r.split(":", 1)[1]
            return lambda s: _hash_color(seed, s, self.arity)
        if r == "lift":
            if self.inner is None:
                raise RamseyError("lift needs an inner colouring")
            inner = self.inner

            def lifted(s):
                if len(s) < 2:
                    raise ShortElement(f"{s} has fewer than two elements")
                return inner(s[:2])

            return lifted
        raise RamseyError(f"unknown colouring rule {r!r}")

    def __call__(self, s) -> int:
        s = tuple(s)
        if self.table is not None:
            d = _table_dict(self.table)
            if s not in d:
                raise ColoringUndefined(f"no colour for {s}")
            return d[s]
        return self._resolve()(s) % self.arity

    def describe(self) -> str:
        if self.table is not None:
            return f"table[{len(self.table)}]"
        if self.rule == "lift":
            return f"lift({self.inner.describe()})"
        return self.rule

    def to_csv(self) -> str:
        if self.table is None:
            raise RamseyError("only table colourings serialise to CSV")
        return "".join(f"{','.join(map(str, s))};{c}\n" for s, c in self.table)


_TABLES: dict = {}


def _table_dict(table: tuple) -> dict:
    d = _TABLES.get(table)
    if d is None:
        d = _TABLES[table] = dict(table)
    return d


def parse_coloring(text: str, arity: int = 2) -> Coloring:
    text = text.strip()
    if text.startswith("lift(") and text.endswith(")"):
        return Coloring(arity, "lift", inner=parse_coloring(text[5:-1], arity))
    return Coloring(arity, text)


def read_csv(text: str, arity: Optional[int] = None) -> Coloring:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        elems, _, color = line.partition(";")
        s = tuple(int(x) for x in elems.split(",") if x.strip())
        rows.append((s, int(color)))
    if arity is None:
        arity = max(2, 1 + max((c for _, c in rows), default=0))
    return Coloring(arity, table=tuple(rows))


def table_from(code: Code, col: Coloring, w: Window) -> Coloring:
    """Tabulate a rule colouring on the elements of B inside the window."""
    return Coloring(col.arity, table=tuple((s, col(s)) for s in elements(code, w)))


# witnesses --------------------------------------------------------------


@dataclass(frozen=True)
class MonochromeWitness:
    set: tuple
    color: int
    discarded_prefix: int = 0

    def to_json(self):
        return {"set": list(self.set), "color": self.color,
                "discarded_prefix": self.discarded_prefix}


def verify_monochrome(code: Code, col: Coloring, wit: MonochromeWitness) -> Verdict:
    """Every element of B|set past the discarded prefix has the stated colour,
    and there is at least one such element."""
    seen = False
    for s in elements_on(code, wit.set[wit.discarded_prefix:]):
        seen = True
        if col(s) != wit.color:
            return Fail(s)
    return PASS if seen else Fail("no element of B inside the set")


# Nash-Williams search --------------------------------------------------


def _ending_at(code: Code, chosen: tuple, x: int):
    """Elements of B inside chosen + (x,) whose maximum is x."""

    def rec(r, i, prefix):
        nxt = step(r, x)
        if nxt is not None and is_eps(nxt):
            yield prefix + (x,)
        for j in range(i, len(chosen)):
            r2 = step(r, chosen[j])
            if r2 is None or is_eps(r2):
                continue
            yield from rec(r2, j + 1, prefix + (chosen[j],))

    if is_eps(code):
        return
    yield from rec(code, 0, ())


def _constant_color(code, col, m) -> Optional[int]:
    color = None
    for s in elements_on(code, m):
        c = col(s)
        if color is None:
            color = c
        elif c != color:
            return -1
    return color


def _brute_nw(code, col, pool, target):
    for m in combinations(pool, target):
        c = _constant_color(code, col, m)
        if c is not None and c >= 0:
            return m, c
    return None


def _pruned_nw(code, col, pool, target):
    def rec(i, chosen, color):
        if len(chosen) == target:
            return (chosen, color) if color is not None else None
        for j in range(i, len(pool) - (target - len(chosen)) + 1):
            x = pool[j]
            c = color
            ok = True
            for s in _ending_at(code, chosen, x):
                cs = col(s)
                if c is None:
                    c = cs
                elif cs != c:
                    ok = False
                    break
            if ok:
                hit = rec(j + 1, chosen + (x,), c)
                if hit is not None:
                    return hit
        return None

    return rec(0, (), None)


def _extend(code, pred, pool, chosen):
    """Greedily add pool points (ascending) while ``pred`` keeps holding."""
    chosen = tuple(chosen)
    for x in pool:
        if x in chosen:
            continue
        cand = tuple(sorted(chosen + (x,)))
        if pred(cand):
            chosen = cand
    return chosen


def nash_williams_search(code: Code, col: Coloring, w: Window, target: int,
                         strategy: str = "prune", extend: bool = True,
                         pool: Optional[Sequence[int]] = None) -> MonochromeWitness:
    """Lexicographically least M of size ``target`` with B|M nonempty and
    monochromatic, then greedily enlarged inside the window."""
    pool = tuple(range(w.bound)) if pool is None else as_set(pool)
    if strategy == "brute":
        hit = _brute_nw(code, col, pool, target)
    elif strategy == "prune":
        hit = _pruned_nw(code, col, pool, target)
    else:
        raise RamseyError(f"unknown strategy {strategy!r}")
    if hit is None:
        raise NotFoundInWindow(f"no monochromatic set of size {target} below {w.bound}")
    m, color = hit
    if extend:
        m = _extend(code, lambda c: _constant_color(code, col, c) == color, pool, m)
    return MonochromeWitness(tuple(m), color, 0)


def minimal_part_partition(code: Code, w: Window) -> Coloring:
    """0 on elements with no proper subset in B, 1 on the rest."""
    rows = []
    for t in elements(code, w):
        inner = any(s != t for s in elements_on(code, t))
        rows.append((t, int(inner)))
    return Coloring(2, table=tuple(rows))


def lift_coloring(col2: Coloring, code: Optional[Code] = None,
                  w: Optional[Window] = None) -> Coloring:
    """The colouring t -> col2(two least elements of t).

    With ``code`` and ``w`` given, every element in the window is checked
    to have size at least two.
    """
    if code is not None and w is not None:
        for t in elements(code, w):
            if len(t) < 2:
                raise ShortElement(f"{t} has fewer than two elements")
    return Coloring(col2.arity, "lift", inner=col2)


# almost monochromatic sets ---------------------------------------------


def _almost_colors(code, cols, h, max_discard, need_nonempty):
    """Per colouring: least d <= max_discard with B|h[d:] constant.
    Returns a list of (d, colour) or None if some colouring has no such d."""
    out = []
    for col in cols:
        found = None
        for d in range(0, min(max_discard, len(h)) + 1):
            c = _constant_color(code, col, h[d:])
            if c is None:
                if need_nonempty:
                    continue
                found = (d, None)
                break
            if c >= 0:
                found = (d, c)
                break
        if found is None:
            return None
        out.append(found)
    return out


def almost_monochromatic_search(code: Code, cols: Sequence[Coloring], w: Window,
                                target: int, max_discard: int = 1,
                                pool: Optional[Sequence[int]] = None,
                                extend: bool = True) -> list:
    """Common H with |H| = target + max_discard (then greedily enlarged)
    such that each colouring is constant and nonempty on B|H past a
    discarded prefix of at most ``max_discard`` points."""
    if not cols:
        raise RamseyError("colouring family must be nonempty")
    pool = tuple(range(w.bound)) if pool is None else as_set(pool)
    size = target + max_discard

    def rec(i, chosen):
        if len(chosen) == size:
            return chosen if _almost_colors(code, cols, chosen, max_discard, True) else None
        for j in range(i, len(pool) - (size - len(chosen)) + 1):
            cand = chosen + (pool[j],)
            if _almost_colors(code, cols, cand, max_discard, False) is None:
                continue
            hit = rec(j + 1, cand)
            if hit is not None:
                return hit
        return None

    h = rec(0, ())
    if h is None:
        raise NotFoundInWindow(f"no almost monochromatic set of size {size} below {w.bound}")
    base = _almost_colors(code, cols, h, max_discard, True)
    if extend:
        def keep(c):
            got = _almost_colors(code, cols, c, max_discard, True)
            return got is not None and [g[1] for g in got] == [b[1] for b in base]
        h = _extend(code, keep, pool, h)
        base = _almost_colors(code, cols, h, max_discard, True)
    return [MonochromeWitness(tuple(h), c, d) for d, c in base]


def verify_almost(code: Code, cols: Sequence[Coloring], witnesses) -> Verdict:
    for col, wit in zip(cols, witnesses):
        v = verify_monochrome(code, col, wit)
        if not v:
            return Fail((col.describe(), v.witness))
    return PASS


# diagonal monochromatization -------------------------------------------


@dataclass
class DiagonalResult:
    set: tuple
    colors: tuple
    trace: list = field(default_factory=list)

    def witnesses(self) -> list:
        return [MonochromeWitness(self.set, c, 0) for c in self.colors]

    def to_json(self):
        return {"set": list(self.set), "colors": list(self.colors), "trace": self.trace}


def _compatible(vec, want) -> bool:
    return all(v is None or v == w for v, w in zip(vec, want))


def _diagonal(code, cols, pool, prefix, arity, trace, depth):
    """Colour vector and surviving pool: every element of B inside
    prefix + (subset of surviving pool) has the returned colours."""
    if is_eps(code):
        return tuple(c(prefix) for c in cols), pool
    if is_uniform(code):
        rk = rank(code)
        if rk.is_finite and rk.finite_value() > len(pool):
            return (None,) * len(cols), pool
    spine = []
    rest = pool
    while rest:
        x, above = rest[0], rest[1:]
        sub = step(code, x)
        if sub is None:
            spine.append((x, (None,) * len(cols)))
            rest = above
            continue
        vec, kept = _diagonal(sub, cols, above, prefix + (x,), arity, trace, depth + 1)
        spine.append((x, vec))
        if depth == 0:
            trace.append({"x": x, "colors": list(vec), "kept": len(kept)})
        rest = kept
    best = None
    for want in product(range(arity), repeat=len(cols)):
        members = [x for x, vec in spine if _compatible(vec, want)]
        definite = sum(1 for x, vec in spine if _compatible(vec, want)
                       and any(v is not None for v in vec))
        key = (len(members), definite)
        if best is None or key > best[0]:
            best = (key, want, members)
    _, want, members = best
    realized = []
    for i in range(len(cols)):
        hit = any(vec[i] is not None for x, vec in spine if x in members)
        realized.append(want[i] if hit else None)
    return tuple(realized), tuple(members)


def diagonal_monochromatic(code: Code, cols: Sequence[Coloring], w: Window) -> DiagonalResult:
    """Recursive fusion: every spine point x gets a colour vector for the
    residual above x, pools shrink to the chosen classes, and the final set
    is the largest class of compatible spine points.  The outcome is
    re-verified exhaustively before it is returned."""
    if not cols:
        raise RamseyError("colouring family must be nonempty")
    arity = max(c.arity for c in cols)
    trace: list = []
    vec, members = _diagonal(code, list(cols), tuple(range(w.bound)), (), arity, trace, 0)
    if any(v is None for v in vec):
        raise NotFoundInWindow("some colouring has no element of B inside the diagonal set")
    res = DiagonalResult(tuple(members), tuple(vec), trace)
    v = verify_almost(code, cols, res.witnesses())
    if not v:
        raise RamseyError(f"diagonal set failed re-verification: {v.witness}")
    return res
