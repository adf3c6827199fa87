"""Comparison of barriers and double-arrow witnesses.

A witness is a nondecreasing breakpoint list k_0 <= k_1 <= ... that
defines f(n) = max{i : k_i <= n}, and f(n) = 0 below k_0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .barrier import (
    Code,
    Verdict,
    PASS,
    Fail,
    FuelExhausted,
    RankMismatch,
    BarrierError,
    _stable_from,
    elements,
    elements_on,
    is_eps,
    is_uniform,
    rank,
    rank_or_below,
    residual,
    step,
    tree_contains,
)
from .ordinal import OMEGA, Ordinal, to_text as ord_text
from .ramsey import Coloring, NotFoundInWindow, nash_williams_search
from .sets import Window, interval_index


class RankOrderViolated(BarrierError):
    pass


class NotUniform(BarrierError):
    pass


# comparison -------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    kind: str  # "BleqC" | "CleqB" | "Undecided"
    witness: tuple = ()

    def to_json(self):
        return {"kind": self.kind, "set": list(self.witness)}


def _prefix_in(code: Code, s) -> bool:
    """Some initial segment of ``s`` lies in the family."""
    r = code
    if is_eps(r):
        return True
    for x in s:
        r = step(r, x)
        if r is None:
            return False
        if is_eps(r):
            return True
    return False


def compare_embedding(codeB: Code, codeC: Code, w: Window) -> Comparison:
    """Look for M of size depth on which B|M is below C|M or the reverse.

    Elements of B are coloured by whether they lie in T(C).  A monochromatic
    set of colour 0 gives B|M below C|M; colour 1 forces every element of
    C|M to sit inside T(B), which is then checked.
    """
    pool = tuple(range(w.bound))
    t_c = {}

    def chi(b):
        if b not in t_c:
            t_c[b] = 0 if residual(codeC, b) is not None else 1
        return t_c[b]

    table = Coloring(2, table=tuple((b, chi(b)) for b in elements(codeB, w)))
    try:
        wit = nash_williams_search(codeB, table, w, w.depth, pool=pool)
    except NotFoundInWindow:
        return Comparison("Undecided")
    if wit.color == 0:
        return Comparison("BleqC", wit.set)
    if all(residual(codeB, c) is not None for c in elements_on(codeC, wit.set)):
        return Comparison("CleqB", wit.set)
    return Comparison("Undecided", wit.set)


# witnesses --------------------------------------------------------------


@dataclass
class DoubleArrowWitness:
    breakpoints: list
    phase_log: list = field(default_factory=list)
    kind: str = "alternating"  # | "all-intervals" | "composed"
    stabilization: dict = field(default_factory=dict)
    parts: tuple = ()

    def f(self, n: int) -> int:
        i = interval_index(self.breakpoints, n)
        return max(i, 0)

    def image(self, s) -> tuple:
        return tuple(self.f(x) for x in s)

    def to_json(self):
        out = {"kind": self.kind, "breakpoints": list(self.breakpoints),
               "phase_log": self.phase_log}
        if self.stabilization:
            out["stabilization"] = {str(k): v for k, v in sorted(self.stabilization.items())}
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out

    @classmethod
    def from_json(cls, data) -> "DoubleArrowWitness":
        return cls(
            list(data["breakpoints"]),
            list(data.get("phase_log", [])),
            data.get("kind", "alternating"),
            {int(k): v for k, v in data.get("stabilization", {}).items()},
            tuple(cls.from_json(p) for p in data.get("parts", [])),
        )


def _log(kind, n, s, m, lhs, rhs, target):
    return {"check": kind, "n": n, "s": list(s), "m": m,
            "lhs": ord_text(lhs), "rhs": ord_text(rhs), "target": list(target)}


def _least_m(codeB, s, goal: Ordinal, fuel: int) -> tuple:
    """Least m > max(s) with rank_B(s u {m}) >= goal."""
    lo = s[-1] + 1 if s else 0
    for m in range(lo, lo + fuel):
        lhs = rank_or_below(codeB, s + (m,))
        if lhs >= goal:
            return m, lhs
    raise FuelExhausted(f"no m below {lo + fuel} for s={s}")


def _transversals(codeB, intervals):
    """Sets in T(B) meeting each interval in at most one point."""

    def rec(i, prefix, r):
        if i == len(intervals):
            yield prefix
            return
        yield from rec(i + 1, prefix, r)
        if is_eps(r):
            return
        lo, hi = intervals[i]
        for x in range(lo, hi):
            nxt = step(r, x)
            if nxt is not None:
                yield from rec(i + 1, prefix + (x,), nxt)

    yield from rec(0, (), codeB)


def double_arrow_witness(codeB: Code, codeC: Code, steps: int = 8,
                         fuel: int = 240) -> DoubleArrowWitness:
    """Alternating construction of a_i < b_i < a_{i+1} for B uniform with
    rank(B) >= rank(C).  Each a_{n+1} (b_{n+1}) is the largest least-m over
    the transversals of the even (odd) intervals built so far."""
    if rank(codeB) < rank(codeC):
        raise RankOrderViolated(f"rank {rank(codeB)} < {rank(codeC)}")
    if not is_uniform(codeB):
        raise NotUniform("the source barrier must be uniform")
    log = []
    a0, lhs = _least_m(codeB, (), rank_or_below(codeC, (0,)), fuel)
    log.append(_log("step0_a", 0, (), a0, lhs, rank_or_below(codeC, (0,)), (0,)))
    b0, lhs = _least_m(codeB, (), rank_or_below(codeC, (1,)), fuel)
    b0 = max(b0, a0 + 1)
    log.append(_log("step0_b", 0, (), b0, rank_or_below(codeB, (b0,)),
                    rank_or_below(codeC, (1,)), (1,)))
    a, b = [a0], [b0]
    wit = DoubleArrowWitness([a0, b0], log)
    for n in range(steps):
        for phase in ("a", "b"):
            if phase == "a":
                intervals = [(a[i], b[i]) for i in range(n + 1)]
                label = 2 * n + 2
                floor = b[n] + 1
            else:
                intervals = [(b[i], a[i + 1]) for i in range(n + 1)]
                label = 2 * n + 3
                floor = a[n + 1] + 1
            best = floor
            for s in _transversals(codeB, intervals):
                fs = wit.image(s)
                lhs0, rhs0 = rank_or_below(codeB, s), rank_or_below(codeC, fs)
                log.append(_log(f"phi_{phase}", n + 1, s, None, lhs0, rhs0, fs))
                target = tuple(sorted(set(fs) | {label}))
                goal = rank_or_below(codeC, target)
                m, lhs = _least_m(codeB, s, goal, fuel)
                log.append(_log(f"psi_{phase}", n + 1, s, m, lhs, goal, target))
                best = max(best, m)
            (a if phase == "a" else b).append(best)
            wit.breakpoints.append(best)
    return wit


def double_arrow_witness_rank_omega(codeB: Code, w: Window) -> DoubleArrowWitness:
    """Breakpoints m_i: least m with rank({m'}) >= i+1 for all window m' >= m.
    Targets the Schreier barrier."""
    if rank(codeB) != OMEGA:
        raise RankMismatch(f"rank is {rank(codeB)}, not w")
    ranks = [rank_or_below(codeB, (m,)) for m in range(w.bound)]
    bps = []
    i = 0
    while True:
        m = None
        for cand in range(w.bound):
            if all(r >= i + 1 for r in ranks[cand:]):
                m = cand
                break
        if m is None:
            break
        bps.append(m)
        i += 1
    log = [{"check": "threshold", "i": j, "m": m, "rank": ord_text(ranks[m])}
           for j, m in enumerate(bps)]
    stab = {}
    for x in range(w.bound):
        r = step(codeB, x)
        if r is None or not rank(r).is_finite:
            continue
        try:
            stab[x] = _stable_from(r, w, x + 1)
        except FuelExhausted:
            stab[x] = w.bound
    return DoubleArrowWitness(bps, log, "all-intervals", stab)


# verification -----------------------------------------------------------


def _admissible(wit: DoubleArrowWitness, b) -> bool:
    if wit.kind == "composed":
        f, g = wit.parts
        return _admissible(f, b) and _admissible(g, f.image(b))
    if not wit.breakpoints or b[0] < wit.breakpoints[0]:
        return False
    idx = [interval_index(wit.breakpoints, x) for x in b]
    if len(set(idx)) != len(idx):
        return False
    if wit.kind == "alternating" and len({i % 2 for i in idx}) > 1:
        return False
    if wit.kind == "all-intervals":
        for i, x in enumerate(b):
            k = wit.stabilization.get(x, 0)
            if any(y < k for y in b[i + 1:]):
                return False
    return True


def admissible_elements(wit: DoubleArrowWitness, codeB: Code, w: Window):
    for b in elements(codeB, w):
        if b and _admissible(wit, b):
            yield b


def _check(wit, codeC, b):
    img = wit.image(b)
    if len(set(img)) != len(img):
        return Fail((b, img, "f not injective"))
    if not _prefix_in(codeC, img):
        return Fail((b, img))
    return None


def verify_double_arrow(wit: DoubleArrowWitness, codeB: Code, codeC: Code, w: Window,
                        samples: Optional[int] = None, seed: int = 0) -> Verdict:
    """Exhaustive over admissible elements of B (every thinned N), or over
    ``samples`` seeded thinned sets when given."""
    if samples is None:
        for b in admissible_elements(wit, codeB, w):
            bad = _check(wit, codeC, b)
            if bad is not None:
                return bad
        return PASS
    rng = random.Random(seed)
    for _ in range(samples):
        n = _sample_thinned(wit, w, rng)
        for b in elements_on(codeB, n):
            if not b:
                continue
            bad = _check(wit, codeC, b)
            if bad is not None:
                return bad
    return PASS


def _sample_thinned(wit: DoubleArrowWitness, w: Window, rng: random.Random) -> tuple:
    """A random thinned set: at most one point per interval, one parity
    class for alternating witnesses, spacing for rank-w witnesses."""
    parity = rng.randrange(2)
    out = []
    used = set()
    for x in range(w.bound):
        if rng.random() < 0.5:
            continue
        cand = tuple(out) + (x,)
        if wit.kind == "alternating":
            i = interval_index(wit.breakpoints, x)
            if i < 0 or i % 2 != parity or i in used:
                continue
        if _admissible(wit, cand):
            out.append(x)
            used.add(interval_index(wit.breakpoints, x))
    return tuple(out)


def compose(f: DoubleArrowWitness, g: DoubleArrowWitness, bound: int) -> DoubleArrowWitness:
    """g after f, as breakpoints K_i = least n with g(f(n)) >= i."""
    top = g.f(f.f(bound - 1))
    bps = []
    for i in range(top + 1):
        n = next(n for n in range(bound) if g.f(f.f(n)) >= i)
        bps.append(n)
    return DoubleArrowWitness(bps, [], "composed", {}, (f, g))


def verify_composition(f: DoubleArrowWitness, g: DoubleArrowWitness, codeB: Code,
                       codeD: Code, w: Window) -> Verdict:
    h = compose(f, g, w.bound)
    for b in admissible_elements(h, codeB, w):
        if h.image(b) != g.image(f.image(b)):
            return Fail((b, "composition mismatch"))
        bad = _check(h, codeD, b)
        if bad is not None:
            return bad
    return PASS


def recheck_phase_log(wit: DoubleArrowWitness, codeB: Code, codeC: Code) -> Verdict:
    """Re-evaluate every logged inequality with fresh rank calls."""
    for entry in wit.phase_log:
        chk = entry.get("check")
        if chk == "threshold":
            if not rank_or_below(codeB, (entry["m"],)) >= entry["i"] + 1:
                return Fail(entry)
            continue
        s = tuple(entry["s"])
        if entry["m"] is not None:
            s = s + (entry["m"],)
        lhs = rank_or_below(codeB, s)
        rhs = rank_or_below(codeC, tuple(entry["target"]))
        if not lhs >= rhs:
            return Fail(entry)
        if ord_text(lhs) != entry["lhs"] or ord_text(rhs) != entry["rhs"]:
            return Fail(entry)
    return PASS
