"""Hechler trees, the ideals FIN^B and G_c(B), and Katetov shrinking.

Sequences in omega^{<omega} are tuples.  The fixed enumeration s_0, s_1, ...
orders them by (max + length, lexicographic) with the empty sequence first.
Every group of equal key is finite, so this is an omega-type enumeration,
and it extends the sibling/initial-segment order (see ``extends_prec``).

Hechler trees here live on increasing sequences only, because barrier
elements are increasing.  A node s has successors
{n in base : n > max(s), n >= k_s}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence, Union

from .barrier import (
    BarrierError,
    Code,
    PASS,
    Fail,
    Verdict,
    contains,
    elements,
    elements_on,
    from_json as code_from_json,
    is_eps,
    rank,
    residual,
    step,
    to_json as code_to_json,
    tree_contains,
)
from .embed import RankOrderViolated
from .ordinal import ONE, ZERO
from .ramsey import NotFoundInWindow, _ending_at
from .sets import SetDescriptor, Window, as_set, omega

__all__ = [
    "NotInIdeal",
    "WindowExhausted",
    "seq_key",
    "seq_index",
    "seq_at",
    "canonical_enumeration",
    "extends_prec",
    "FnTable",
    "HechlerTree",
    "full_tree",
    "root_tree",
    "tree_from_fn",
    "fn_from_tree",
    "FinDescriptor",
    "fin_contains",
    "hechler_avoiding",
    "verify_avoiding",
    "Domination",
    "hechler_dominating",
    "GcResult",
    "gc_positive",
    "ShrinkCertificate",
    "verify_shrink",
    "katetov_shrink_recursive",
    "katetov_shrink_bruteforce",
    "random_map",
    "EUp",
    "e_up",
    "AdStageCertificate",
    "ad_stage",
    "selective_branch_set",
    "verify_branch_set",
    "verify_noCseq_hypotheses",
]


class NotInIdeal(BarrierError):
    """A descriptor has infinitely many bad columns."""


class WindowExhausted(BarrierError):
    """The window is too small for the requested construction."""


# Canonical enumeration of omega^{<omega} -------------------------------


def seq_key(s) -> int:
    s = tuple(s)
    return max(s) + len(s) if s else 0


@lru_cache(maxsize=None)
def _group_size(n: int) -> int:
    """Number of nonempty sequences with max + len == n."""
    return sum((n - L + 1) ** L - (n - L) ** L for L in range(1, n + 1))


@lru_cache(maxsize=None)
def _groups_below(n: int) -> int:
    return 1 + sum(_group_size(k) for k in range(1, n))


def _completions(mp: int, lp: int, n: int) -> int:
    """Sequences extending a prefix (max mp, length lp) whose key is n."""
    total = 0
    for L in range(lp, n - mp + 1):
        m, r = n - L, L - lp
        total += (m + 1) ** r if m == mp else (m + 1) ** r - m ** r
    return total


def seq_index(s) -> int:
    """Position of ``s`` in the canonical enumeration."""
    s = tuple(int(x) for x in s)
    if not s:
        return 0
    if min(s) < 0:
        raise ValueError("sequences of naturals only")
    n = seq_key(s)
    idx = _groups_below(n)
    mp = -1
    for j, x in enumerate(s):
        for v in range(x):
            idx += _completions(max(mp, v), j + 1, n)
        mp = max(mp, x)
    return idx


def seq_at(i: int) -> tuple:
    """Inverse of ``seq_index``."""
    if i < 0:
        raise ValueError("index must be a natural")
    if i == 0:
        return ()
    n = 1
    while _groups_below(n + 1) <= i:
        n += 1
    r = i - _groups_below(n)
    p, mp = (), -1
    while True:
        if p and mp + len(p) == n:
            if r == 0:
                return p
            r -= 1
        v = 0
        while True:
            c = _completions(max(mp, v), len(p) + 1, n)
            if r < c:
                break
            r -= c
            v += 1
        p, mp = p + (v,), max(mp, v)


def _group(n: int):
    def rec(p, mp):
        if p and mp + len(p) == n:
            yield p
        for v in range(n):
            m = max(mp, v)
            if m + len(p) + 1 > n:
                break
            yield from rec(p + (v,), m)

    yield from rec((), -1)


def canonical_enumeration(count: int) -> list:
    out = [()]
    n = 1
    while len(out) < count:
        for s in _group(n):
            out.append(s)
            if len(out) >= count:
                break
        n += 1
    return out[:count]


def _prec(s, t) -> bool:
    if len(s) < len(t) and t[: len(s)] == s:
        return True
    return (len(s) == len(t) and len(s) > 0 and s[:-1] == t[:-1]
            and s[-1] < t[-1])


def extends_prec(count: int) -> bool:
    """Check that s_i < s_j in the sibling/segment order forces i < j."""
    seqs = canonical_enumeration(count)
    for i, s in enumerate(seqs):
        for j in range(i):
            if _prec(s, seqs[j]):
                return False
    return True


# Function tables and Hechler trees -------------------------------------


@dataclass(frozen=True)
class FnTable:
    """f in omega^omega: dense ``values``, sparse overrides, then ``default``."""

    values: tuple = ()
    default: int = 0
    sparse: tuple = ()  # sorted (index, value) pairs past the dense part

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "sparse", tuple(sorted((int(i), int(v)) for i, v in self.sparse)))
        if any(v < 0 for v in self.values) or self.default < 0:
            raise ValueError("table values must be naturals")
        if any(i < len(self.values) or v < 0 for i, v in self.sparse):
            raise ValueError("sparse entries must sit past the dense part")

    def __call__(self, i: int) -> int:
        if i < len(self.values):
            return self.values[i]
        for j, v in self.sparse:
            if j == i:
                return v
        return self.default

    def to_json(self):
        return {"values": list(self.values), "default": self.default,
                "sparse": [list(p) for p in self.sparse]}

    @classmethod
    def from_json(cls, data) -> "FnTable":
        return cls(tuple(data.get("values", ())), data.get("default", 0),
                   tuple(tuple(p) for p in data.get("sparse", ())))


@dataclass(frozen=True)
class HechlerTree:
    """A Hechler tree given by its threshold function s -> k_s.

    Lookup order: ``explicit`` nodes, then ``grafts`` (a subtree placed
    under the node (n,), in absolute coordinates), then ``parts`` combined
    as max of their f_T values plus ``bump``, then ``fn`` via the canonical
    index, then ``default``.  With bump 0 the parts combine to their
    intersection; with bump 1 to a tree dominating all of them.
    """

    base: SetDescriptor = field(default_factory=omega)
    explicit: tuple = ()  # sorted (node, threshold) pairs
    default: int = 0
    fn: Optional[FnTable] = None
    parts: tuple = ()
    bump: int = 0
    grafts: tuple = ()  # sorted (n, HechlerTree) pairs

    def __post_init__(self):
        ex = {}
        for node, k in (self.explicit.items() if isinstance(self.explicit, dict) else self.explicit):
            ex[as_set(node)] = int(k)
        for node in ex:
            if node and node[:-1] not in ex:
                raise ValueError(f"explicit nodes not closed under prefixes: {node}")
        object.__setattr__(self, "explicit", tuple(sorted(ex.items(), key=lambda p: (len(p[0]), p[0]))))
        gr = dict(self.grafts.items() if isinstance(self.grafts, dict) else self.grafts)
        object.__setattr__(self, "grafts", tuple(sorted(gr.items())))
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "_ex", ex)
        object.__setattr__(self, "_gr", gr)

    def threshold(self, s) -> int:
        s = tuple(s)
        if s in self._ex:
            return self._ex[s]
        if s and s[0] in self._gr:
            return self._gr[s[0]].threshold(s[1:])
        if self.parts:
            return max(p.f_value(s) for p in self.parts) + self.bump
        if self.fn is not None:
            return self.fn(seq_index(s))
        return self.default

    def contains(self, s) -> bool:
        s = tuple(s)
        if any(a >= b for a, b in zip(s, s[1:])):
            return False
        for j, x in enumerate(s):
            if x not in self.base or x < self.threshold(s[:j]):
                return False
        return True

    __contains__ = contains

    def f_value(self, s) -> int:
        """f_T at s: the threshold if s is a node, 0 otherwise."""
        return self.threshold(s) if self.contains(s) else 0

    def successors(self, s, bound: int) -> tuple:
        s = tuple(s)
        if not self.contains(s):
            return ()
        lo = max(self.threshold(s), s[-1] + 1 if s else 0)
        return tuple(x for x in self.base.below(bound) if x >= lo)

    def agrees_with(self, other: "HechlerTree", w: Window) -> bool:
        """Same nodes and thresholds on increasing sequences inside ``w``."""
        def rec(s):
            if self.contains(s) != other.contains(s):
                return False
            if not self.contains(s):
                return True
            if len(s) >= w.depth:
                return True
            if self.threshold(s) != other.threshold(s) and (
                    self.successors(s, w.bound) != other.successors(s, w.bound)):
                return False
            lo = s[-1] + 1 if s else 0
            return all(rec(s + (x,)) for x in range(lo, w.bound))

        return rec(())

    def to_json(self):
        out = {"base": self.base.to_json(),
               "explicit": [[list(n), k] for n, k in self.explicit],
               "default": self.default}
        if self.fn is not None:
            out["fn"] = self.fn.to_json()
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
            out["bump"] = self.bump
        if self.grafts:
            out["grafts"] = [[n, g.to_json()] for n, g in self.grafts]
        return out

    @classmethod
    def from_json(cls, data) -> "HechlerTree":
        return cls(
            SetDescriptor.from_json(data["base"]) if "base" in data else omega(),
            tuple((tuple(n), k) for n, k in data.get("explicit", ())),
            data.get("default", 0),
            FnTable.from_json(data["fn"]) if "fn" in data else None,
            tuple(cls.from_json(p) for p in data.get("parts", ())),
            data.get("bump", 0),
            tuple((n, cls.from_json(g)) for n, g in data.get("grafts", ())),
        )


def full_tree(base: Optional[SetDescriptor] = None) -> HechlerTree:
    return HechlerTree(base if base is not None else omega())


def root_tree(k: int) -> HechlerTree:
    """succ(root) = omega minus k, everything else full."""
    return HechlerTree(explicit=(((), k),))


def tree_from_fn(f: FnTable) -> HechlerTree:
    """T_f: succ(s_i) is omega minus f(i)."""
    return HechlerTree(default=f.default, fn=f)


def fn_from_tree(t: HechlerTree, count: int = 64) -> FnTable:
    """f_T on the first ``count`` indices, plus sparse entries for the
    explicit nodes beyond them; 0 off the tree."""
    values = [t.f_value(s) for s in canonical_enumeration(count)]
    sparse = []
    if t.fn is not None:
        sparse = [(i, t.f_value(seq_at(i)))
                  for i, _ in t.fn.sparse if i >= count]
    for node, _ in t.explicit:
        i = seq_index(node)
        if i >= count:
            sparse.append((i, t.f_value(node)))
    default = t.fn.default if t.fn is not None else t.default
    return FnTable(tuple(values), default, tuple(dict(sparse).items()))


# FIN^B descriptors ------------------------------------------------------


@dataclass(frozen=True)
class FinDescriptor:
    """A set of finite sets built from explicit sets, full columns B(n)
    and per-column descriptors for {s minus n : s in X, min s = n}.

    ``columns_from`` marks every column from that index on as full; such
    a set is outside FIN^B whenever those columns are inhabited.
    """

    explicit: tuple = ()
    columns: tuple = ()
    per_column: tuple = ()  # sorted (n, FinDescriptor) pairs
    columns_from: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "explicit", tuple(sorted({as_set(s) for s in self.explicit})))
        object.__setattr__(self, "columns", tuple(sorted(set(int(n) for n in self.columns))))
        pc = dict(self.per_column.items() if isinstance(self.per_column, dict) else self.per_column)
        object.__setattr__(self, "per_column", tuple(sorted(pc.items())))

    def column_map(self) -> dict:
        """Normalise into n -> "full" or a FinDescriptor for the column."""
        out: dict = {n: "full" for n in self.columns}
        pieces: dict = {}
        for s in self.explicit:
            if s:
                pieces.setdefault(s[0], []).append(s[1:])
        for n, sub in self.per_column:
            if out.get(n) == "full":
                continue
            pieces.setdefault(n, [])
            out[n] = sub
        for n, rest in pieces.items():
            if out.get(n) == "full":
                continue
            sub = out.get(n, FinDescriptor())
            out[n] = FinDescriptor(sub.explicit + tuple(rest), sub.columns,
                                   sub.per_column, sub.columns_from)
        return out

    def to_json(self):
        out = {"explicit": [list(s) for s in self.explicit], "columns": list(self.columns),
               "per_column": [[n, d.to_json()] for n, d in self.per_column]}
        if self.columns_from is not None:
            out["columns_from"] = self.columns_from
        return out

    @classmethod
    def from_json(cls, data) -> "FinDescriptor":
        return cls(tuple(tuple(s) for s in data.get("explicit", ())),
                   tuple(data.get("columns", ())),
                   tuple((n, cls.from_json(d)) for n, d in data.get("per_column", ())),
                   data.get("columns_from"))


def fin_contains(d: FinDescriptor, s) -> bool:
    """Membership of the finite set ``s`` in the set described by ``d``."""
    s = as_set(s)
    if s in d.explicit:
        return True
    if not s:
        return False
    if s[0] in d.columns or (d.columns_from is not None and s[0] >= d.columns_from):
        return True
    for n, sub in d.per_column:
        if n == s[0]:
            return fin_contains(sub, s[1:])
    return False


def _inhabited(code: Code, n: int, w: Window) -> bool:
    r = step(code, n)
    if r is None:
        return False
    probe = Window(w.bound, w.depth)
    return is_eps(r) or next(elements(r, probe), None) is not None


def hechler_avoiding(code: Code, x: FinDescriptor, w: Window) -> HechlerTree:
    """A Hechler tree H with X, H and B pairwise meeting nowhere in common.

    The root threshold clears every column where X is not in the ideal of
    the column; the remaining columns get recursively built subtrees.
    """
    if is_eps(code):
        if () in x.explicit or x.columns or x.per_column or x.columns_from is not None:
            raise NotInIdeal("the only ideal set over {empty} is empty")
        return full_tree()
    if x.columns_from is not None:
        for n in range(x.columns_from, w.bound):
            if _inhabited(code, n, w):
                raise NotInIdeal(f"column {n} and all later columns are full")
    bad = []
    grafts = {}
    for n, sub in sorted(x.column_map().items()):
        r = step(code, n)
        if r is None:
            continue
        if sub == "full":
            if is_eps(r) or next(elements(r, w), None) is not None:
                bad.append(n)
            continue
        if is_eps(r):
            if () in sub.explicit:
                bad.append(n)
            continue
        try:
            grafts[n] = hechler_avoiding(r, sub, w)
        except NotInIdeal:
            bad.append(n)
    k = max(bad) + 1 if bad else 0
    grafts = {n: g for n, g in grafts.items()
              if n >= k and (g.grafts or g.explicit != (((), 0),))}
    return HechlerTree(explicit=(((), k),), grafts=tuple(grafts.items()))


def verify_avoiding(code: Code, x: FinDescriptor, h: HechlerTree, w: Window) -> Verdict:
    for b in elements(code, w):
        if fin_contains(x, b) and h.contains(b):
            return Fail(b)
    return PASS


@dataclass(frozen=True)
class Domination:
    tree: HechlerTree
    bounds: tuple  # per input tree, the column bound n

    def to_json(self):
        return {"tree": self.tree.to_json(), "bounds": list(self.bounds)}


def hechler_dominating(trees: Sequence[HechlerTree], code: Code, w: Window) -> Domination:
    """H from max(f_T) + 1 over the family; for each T the least n with
    H, B minus T inside the columns up to n (0 when nothing escapes)."""
    trees = tuple(trees)
    if not trees:
        return Domination(full_tree(), ())
    bases = {t.base for t in trees}
    if len(bases) != 1:
        raise ValueError("trees must share their base")
    if all(t.agrees_with(full_tree(t.base), w) for t in trees):
        return Domination(full_tree(trees[0].base), (0,) * len(trees))
    h = HechlerTree(trees[0].base, parts=trees, bump=1)
    inside = [b for b in elements(code, w) if h.contains(b)]
    bounds = []
    for t in trees:
        escapes = [b[0] for b in inside if b and not t.contains(b)]
        bounds.append(max(escapes, default=0))
    return Domination(h, tuple(bounds))


# G_c(B) -----------------------------------------------------------------

Subset = Callable[[tuple], object]


@dataclass(frozen=True)
class GcResult:
    kind: str  # "Positive" | "NegativeInWindow"
    x: tuple = ()

    def to_json(self):
        return {"kind": self.kind, "x": list(self.x)}


def _closed_search(code: Code, ok: Callable[[tuple], bool], pool: tuple, target: int):
    """Lex-least M of size ``target`` with B|M nonempty and ``ok`` on all of it."""

    def rec(i, chosen, seen):
        if len(chosen) == target:
            return chosen if seen else None
        for j in range(i, len(pool) - (target - len(chosen)) + 1):
            x = pool[j]
            hit = list(_ending_at(code, chosen, x))
            if all(ok(b) for b in hit):
                got = rec(j + 1, chosen + (x,), seen or bool(hit))
                if got is not None:
                    return got
        return None

    if is_eps(code):
        return pool[:target] if ok(()) and len(pool) >= target else None
    return rec(0, (), False)


def _all_ok(code: Code, ok, m) -> bool:
    seen = False
    for b in elements_on(code, m):
        if not ok(b):
            return False
        seen = True
    return seen


def _grow(code: Code, pred, pool, chosen) -> tuple:
    chosen = tuple(chosen)
    for x in pool:
        if x not in chosen:
            cand = tuple(sorted(chosen + (x,)))
            if pred(cand):
                chosen = cand
    return chosen


def gc_positive(code: Code, s: Subset, w: Window, target: int) -> GcResult:
    """Look for X with B|X inside S; S is a 0/1 characteristic function."""
    pool = tuple(range(w.bound)) if is_eps(code) else _pool(code, w)
    ok = lambda b: bool(s(b))
    hit = _closed_search(code, ok, pool, target)
    if hit is None:
        return GcResult("NegativeInWindow")
    return GcResult("Positive", _grow(code, lambda m: _all_ok(code, ok, m), pool, hit))


# Katetov shrinking --------------------------------------------------------

MapTable = Union[dict, Callable[[tuple], Optional[tuple]]]


def _apply(f: MapTable, b: tuple):
    return f.get(b) if isinstance(f, dict) else f(b)


def _col(f, b):
    c = _apply(f, b)
    return None if c is None or not c else c[0]


@dataclass(frozen=True)
class ShrinkCertificate:
    """X with f[B|X] either inside the columns up to ``n`` or disjoint from
    ``tree``.  ``headroom`` points of X must lie past the cleared columns.
    ``route`` records which branch of the construction fired."""

    x: tuple
    kind: str  # "ColumnBounded" | "HechlerDisjoint"
    window: Window
    n: Optional[int] = None
    tree: Optional[HechlerTree] = None
    headroom: int = 1
    route: str = ""

    def as_tree(self) -> HechlerTree:
        return root_tree(self.n + 1) if self.kind == "ColumnBounded" else self.tree

    def image(self, code: Code, f: MapTable) -> tuple:
        pts = tuple(x for x in self.x if x < self.window.bound)
        return tuple(sorted({_apply(f, b) for b in elements_on(code, pts, self.window.depth)}))

    def to_json(self):
        out = {"x": list(self.x), "kind": self.kind,
               "window": {"bound": self.window.bound, "depth": self.window.depth},
               "headroom": self.headroom, "route": self.route}
        if self.kind == "ColumnBounded":
            out["n"] = self.n
        else:
            out["tree"] = self.tree.to_json()
        return out

    @classmethod
    def from_json(cls, data) -> "ShrinkCertificate":
        w = Window(data["window"]["bound"], data["window"]["depth"])
        tree = HechlerTree.from_json(data["tree"]) if "tree" in data else None
        return cls(tuple(data["x"]), data["kind"], w, data.get("n"), tree,
                   data.get("headroom", 1), data.get("route", ""))


def verify_shrink(cert: ShrinkCertificate, codeB: Code, codeC: Code, f: MapTable) -> Verdict:
    """Independent re-check of a certificate on its window."""
    w = cert.window
    pts = tuple(x for x in cert.x if x < w.bound)
    seen = False
    for b in elements_on(codeB, pts, w.depth):
        seen = True
        c = _apply(f, b)
        if c is None or not contains(codeC, c):
            return Fail(("not mapped into C", b))
        if cert.kind == "ColumnBounded":
            if c[0] > cert.n:
                return Fail(b)
        elif cert.tree.contains(c):
            return Fail(b)
    if not seen:
        return Fail("B|X is empty")
    cleared = cert.n + 1 if cert.kind == "ColumnBounded" else cert.tree.threshold(())
    if sum(1 for x in pts if x >= cleared) < cert.headroom:
        return Fail(("headroom", cleared))
    return PASS


def _low_column(code, f, pool, target):
    """Least n with target points past n whose images stay in columns <= n."""
    for n in range(max(pool, default=-1) + 1):
        cand = tuple(x for x in pool if x > n)
        if len(cand) < target:
            break
        ok = lambda b, n=n: (_col(f, b) is None) or _col(f, b) <= n
        hit = _closed_search(code, ok, cand, target)
        if hit is not None:
            return n, _grow(code, lambda m: _all_ok(code, ok, m), pool, hit)
    return None


def _avoid_images(codeC, images, w) -> HechlerTree:
    return hechler_avoiding(codeC, FinDescriptor(explicit=tuple(images)), w)


def _intersect(trees) -> HechlerTree:
    trees = tuple(trees)
    return trees[0] if len(trees) == 1 else HechlerTree(parts=trees, bump=0)


def _shrink(codeB, codeC, f, pool, target, w, log):
    """(X, H, route) with f[B|X] avoiding H inside the window."""
    rb, rc = rank(codeB), rank(codeC)
    if not rb < rc:
        raise RankOrderViolated(f"rank {rb} is not below {rc}")
    if is_eps(codeB):
        c = _apply(f, ())
        tree = full_tree() if c is None else _avoid_images(codeC, [c], w)
        return pool, tree, "rank-0"
    low = _low_column(codeB, f, pool, target)
    if low is not None:
        return low[1], root_tree(low[0] + 1), f"low-column({low[0]})"
    pool = tuple(x for x in pool if step(codeB, x) is not None)
    if rb == ONE:
        # one image per column, or everything in a single column
        used, trans, images = set(), [], []
        by_col: dict = {}
        for x in pool:
            c = _apply(f, (x,))
            if c is None:
                trans.append(x)
                continue
            by_col.setdefault(c[0], []).append(x)
            if c[0] not in used:
                used.add(c[0])
                trans.append(x)
                images.append(c)
        # a single column only counts with enough points past it
        roomy = [(c, xs) for c, xs in by_col.items() if sum(1 for x in xs if x > c) >= target]
        col, best = max(roomy, key=lambda p: (len(p[1]), -p[0]), default=(0, []))
        if len(best) > len(trans):
            return tuple(best), root_tree(col + 1), f"rank-1-column({col})"
        return tuple(trans), _avoid_images(codeC, images, w), "rank-1-transversal"
    return _spine(codeB, codeC, f, pool, target, w, log)


def _spine(codeB, codeC, f, pool, target, w, log):
    rb = rank(codeB)
    # columns whose residual rank is too small never receive images
    n0 = 0
    for m in range(w.bound):
        r = step(codeC, m)
        if r is not None and not rank(r) >= rb:
            n0 = m + 1
    spine: list = []
    trees: dict = {}
    cand = tuple(pool)
    n = 0
    while True:
        floor = max(n, n0 - 1)
        keep: list = []
        for y in cand:
            hit = _ending_at(codeB, tuple(keep), y)
            if all(_col(f, b) is None or _col(f, b) > floor for b in hit):
                keep.append(y)
        cand = tuple(keep)
        cn = step(codeC, n)
        subsets = [s for k in range(1, len(spine) + 1) for s in combinations(spine, k)]
        for s in subsets:
            r = residual(codeB, s)
            if r is None or cn is None:
                continue
            if is_eps(r):
                c = _apply(f, s)
                if c is not None and c[0] == n:
                    trees.setdefault(n, []).append(_avoid_images(cn, [c[1:]], w))
                continue
            if not cand:
                continue

            def g(t, s=s):
                c = _apply(f, s + tuple(t))
                return c[1:] if c is not None and c[0] == n else None

            cand, tree, route = _shrink(r, cn, g, cand, target, w, log)
            cand = tuple(cand)
            log.append((n, s, route))
            trees.setdefault(n, []).append(tree)
        if not cand:
            if n >= w.bound:
                break
            n += 1
            continue
        spine.append(cand[0])
        cand = cand[1:]
        n += 1
    grafts = {c: _intersect(ts) for c, ts in trees.items()}
    return tuple(spine), HechlerTree(explicit=(((), 0),), grafts=tuple(grafts.items())), "spine"


def _pool(code: Code, w: Window) -> tuple:
    return tuple(x for x in range(w.bound) if step(code, x) is not None)


def katetov_shrink_recursive(codeB: Code, codeC: Code, f: MapTable, w: Window,
                             target: int = 3) -> ShrinkCertificate:
    """Shrink to X with f[B|X] in FIN^C, following the double induction.

    The low-column case is tried first through a colour-0 search for the
    colourings pi_n.  Rank-1 B is handled directly; otherwise a spine
    m_0 < m_1 < ... is chosen and every column n gets the intersection of
    the trees produced by recursive calls for the residual maps g(s, n).
    """
    log: list = []
    x, tree, route = _shrink(codeB, codeC, f, _pool(codeB, w), target, w, log)
    if route.startswith("low-column") or route.startswith("rank-1-column"):
        n = tree.threshold(()) - 1
        cert = ShrinkCertificate(tuple(x), "ColumnBounded", w, n=n, headroom=target, route=route)
    else:
        cert = ShrinkCertificate(tuple(x), "HechlerDisjoint", w, tree=tree, headroom=target,
                                 route=route)
    verdict = verify_shrink(cert, codeB, codeC, f)
    if not verdict.ok:
        raise WindowExhausted(f"construction left too little room: {verdict.witness}")
    return cert


def katetov_shrink_bruteforce(codeB: Code, codeC: Code, f: MapTable, w: Window,
                              target: int = 3) -> ShrinkCertificate:
    """Exhaustive oracle: lowest column bound first, then a Hechler tree
    avoiding the finite image."""
    if not rank(codeB) < rank(codeC):
        raise RankOrderViolated("rank order violated")
    pool = _pool(codeB, w)

    def column_ok(m, n):
        pts = [x for x in m]
        return (_all_ok(codeB, lambda b: _col(f, b) <= n, pts)
                and sum(1 for x in pts if x > n) >= target)

    for n in range(w.bound):
        for m in combinations([x for x in pool if x > n], target):
            if column_ok(m, n):
                x = _grow(codeB, lambda c: column_ok(c, n), pool, m)
                return ShrinkCertificate(x, "ColumnBounded", w, n=n, headroom=target,
                                         route="bruteforce")

    def tree_for(m):
        if not any(True for _ in elements_on(codeB, m, w.depth)):
            return None
        imgs = {_apply(f, b) for b in elements_on(codeB, m, w.depth)}
        try:
            t = _avoid_images(codeC, imgs, w)
        except NotInIdeal:
            return None
        if sum(1 for x in m if x >= t.threshold(())) < target:
            return None
        return t

    for m in combinations(pool, target):
        if tree_for(m) is not None:
            x = _grow(codeB, lambda c: tree_for(c) is not None, pool, m)
            return ShrinkCertificate(x, "HechlerDisjoint", w, tree=tree_for(x), headroom=target,
                                     route="bruteforce")
    raise NotFoundInWindow(f"no certificate of size {target} below {w.bound}")


def random_map(codeB: Code, codeC: Code, w: Window, seed: int, spread: bool = False) -> dict:
    """A seeded table B|window -> C|window.

    With ``spread`` the image of b starts at or above max(b), capped by the
    highest column inhabited in the window.  This keeps the low-column case
    from firing at once.
    """
    rng = random.Random(seed)
    targets = list(elements(codeC, w))
    if not targets:
        raise WindowExhausted("C has no element inside the window")
    top = max(c[0] for c in targets if c)
    out = {}
    for b in elements(codeB, w):
        pool = targets
        if spread and b:
            pool = [c for c in targets if c and c[0] >= min(b[-1], top)]
        out[b] = rng.choice(pool)
    return out


# Almost disjoint stages -------------------------------------------------


@dataclass(frozen=True)
class EUp:
    """Membership in T(C|E): subsets of E that lie in T(C)."""

    code: Code
    e: SetDescriptor
    window: Window

    def __call__(self, s) -> bool:
        s = as_set(s)
        return all(x in self.e for x in s) and tree_contains(self.code, s)

    def richness(self, h: HechlerTree, n: int) -> int:
        """How many elements of C(n) lie in both E-up and H inside the window."""
        pts = tuple(x for x in self.e.below(self.window.bound) if x >= n)
        if n not in pts:
            return 0
        return sum(1 for c in elements_on(self.code, pts, self.window.depth)
                   if c[0] == n and h.contains(c))


def e_up(codeC: Code, e: SetDescriptor, w: Window) -> EUp:
    return EUp(codeC, e, w)


@dataclass(frozen=True)
class AdStageCertificate:
    a_new: tuple
    x_new: Optional[tuple]
    tree: HechlerTree
    bounds: tuple
    checks: tuple  # (clause, ok, detail) triples

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def to_json(self):
        return {"a_new": [list(c) for c in self.a_new],
                "x_new": None if self.x_new is None else list(self.x_new),
                "bounds": list(self.bounds),
                "checks": [{"clause": c, "ok": ok, "detail": d} for c, ok, d in self.checks],
                "tree": self.tree.to_json()}


def _confined(a_new, other, n) -> tuple:
    meet = sorted(set(a_new) & set(other))
    return all(c[0] <= n for c in meet), len(meet)


def ad_stage(codeC: Code, prior_a: Sequence, prior_images: Sequence, e: SetDescriptor,
             w: Window, current: Optional[tuple] = None, need: Optional[int] = None
             ) -> AdStageCertificate:
    """One step of the almost disjoint recursion.

    ``prior_images`` holds (certificate, image) pairs.  ``current`` is an
    optional (certificate, codeB, map) triple for the new map; its
    certificate is re-verified for the first clause.  The new set takes the
    lexicographically least element of H, C and E-up in each column.
    """
    need = w.depth if need is None else need
    prior_a = [tuple(as_set(c) for c in a) for a in prior_a]
    prior_images = [(cert, tuple(as_set(c) for c in img)) for cert, img in prior_images]
    trees = [_avoid_images(codeC, a, w) for a in prior_a]
    trees += [cert.as_tree() for cert, _ in prior_images]
    dom = hechler_dominating(trees, codeC, w)
    h = dom.tree
    up = e_up(codeC, e, w)
    picked: dict = {}
    for c in elements_on(codeC, e.below(w.bound), w.depth):
        if c and c[0] not in picked and h.contains(c):
            picked[c[0]] = c
    if len(picked) < need:
        raise WindowExhausted(f"only {len(picked)} columns of H, C and E-up below {w.bound}")
    a_new = tuple(picked[n] for n in sorted(picked))
    checks = []
    if current is not None:
        cert, codeB, f = current
        v = verify_shrink(cert, codeB, codeC, f)
        checks.append(("1", v.ok, "certificate re-verified" if v.ok else str(v.witness)))
    for i, a in enumerate(prior_a):
        ok, k = _confined(a_new, a, dom.bounds[i])
        checks.append(("2", ok, f"prior set {i}: {k} common elements"))
    off = len(prior_a)
    for j, (_, img) in enumerate(prior_images):
        ok, k = _confined(a_new, img, dom.bounds[off + j])
        checks.append(("3", ok, f"prior image {j}: {k} common elements"))
    cols = [c[0] for c in a_new]
    checks.append(("4", len(cols) == len(set(cols)), "one element per column"))
    checks.append(("5", all(up(c) and contains(codeC, c) for c in a_new), "inside C and E-up"))
    x_new = None if current is None else tuple(current[0].x)
    return AdStageCertificate(a_new, x_new, h, dom.bounds, tuple(checks))


def selective_branch_set(t: HechlerTree, w: Window) -> tuple:
    """Greedy A inside base and window whose increasing sequences of length
    at most depth are all nodes of ``t``."""
    chosen: list = []
    for x in t.base.below(w.bound):
        fits = all(x >= t.threshold(s) and t.contains(s)
                   for k in range(0, min(len(chosen), w.depth - 1) + 1)
                   for s in combinations(chosen, k))
        if fits:
            chosen.append(x)
    if not chosen:
        raise WindowExhausted("no branch set inside the window")
    return tuple(chosen)


def verify_branch_set(t: HechlerTree, a, depth: int) -> Verdict:
    for k in range(1, depth + 1):
        for s in combinations(as_set(a), k):
            if not t.contains(s):
                return Fail(s)
    return PASS


def verify_noCseq_hypotheses(codeC: Code, family: Sequence, w: Window,
                             grid: Sequence[SetDescriptor]) -> Verdict:
    """Both hypotheses on a finite grid of E's: at most one element per
    column in every A, and some nonempty A inside C|E for each E."""
    fam = [tuple(as_set(c) for c in a) for a in family]
    for i, a in enumerate(fam):
        seen = set()
        for c in a:
            if not c:
                continue
            if c[0] in seen:
                return Fail(("column", i, c[0]))
            seen.add(c[0])
    for e in grid:
        if not any(a and all(contains(codeC, c) and all(x in e for x in c) for c in a)
                   for a in fam):
            return Fail(("uncovered", str(e)))
    return PASS
