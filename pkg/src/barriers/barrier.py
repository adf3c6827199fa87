"""Barrier codes: a small grammar of barriers on omega with exact ranks.

Every operation is driven by :func:`step`, which maps a code and a natural
``x`` to a code for the family {t : {x} u t in B, min t > x}, written in
absolute coordinates.  ``None`` means {x} is not in T(B); the code ``EPS``
(the family {empty set}) means {x} is itself an element of B.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Union

from .ordinal import (
    BELOW_ZERO,
    OMEGA,
    ZERO,
    Ordinal,
    omax,
    pred,
    succ,
    sup_affine,
)
from .sets import SetDescriptor, Tail, Window, as_set, finite_set

# errors -----------------------------------------------------------------


class BarrierError(ValueError):
    pass


class OffBase(BarrierError):
    pass


class NotInTree(BarrierError):
    pass


class TerminalNode(BarrierError):
    pass


class UnsupportedRestriction(BarrierError):
    pass


class FuelExhausted(BarrierError):
    pass


class RankMismatch(BarrierError):
    pass


class NotIncreasing(BarrierError):
    pass


class SizeViolation(BarrierError):
    pass


class BaseClash(BarrierError):
    pass


class CodeSyntaxError(BarrierError):
    pass


# verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "Pass" if self.ok else f"Fail({self.witness})"


PASS = Verdict(True)


def Fail(witness) -> Verdict:
    return Verdict(False, witness)


# codes ------------------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise BarrierError("uniform size must be a natural")


@dataclass(frozen=True)
class Schreier:
    """S_k = {s : |s| = min(s) + k}.  k = 0 is accepted but is not a front."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise BarrierError("schreier index must be a natural")


@dataclass(frozen=True)
class UniformAffine:
    a: int
    b: int


@dataclass(frozen=True)
class SchreierAffine:
    c: int


@dataclass(frozen=True)
class ConstCode:
    code: "Code"


@dataclass(frozen=True)
class Cases:
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not 2 <= len(self.rules) <= 8:
            raise BarrierError("cases modulus must lie in 2..8")
        for r in self.rules:
            if not isinstance(r, (UniformAffine, SchreierAffine)):
                raise BarrierError("cases entries must be affine rules")

    @property
    def modulus(self) -> int:
        return len(self.rules)


TailRule = Union[UniformAffine, SchreierAffine, ConstCode, Cases]


@dataclass(frozen=True)
class Glue:
    """B[n] is ``explicit[n]`` for n below len(explicit), else given by ``tail``.

    Relative codes live on omega and are translated to start at n+1.
    """

    explicit: tuple
    tail: TailRule

    def __post_init__(self):
        object.__setattr__(self, "explicit", tuple(self.explicit))


@dataclass(frozen=True)
class Restrict:
    inner: "Code"
    base: SetDescriptor


@dataclass(frozen=True)
class Shift:
    inner: "Code"
    offset: int


@dataclass(frozen=True)
class Cons:
    root: int
    inner: "Code"


Code = Union[Uniform, Schreier, Glue, Restrict, Shift, Cons]

EPS = Uniform(0)

OMEGA_PLUS_ONE = Glue(
    (EPS,), Cases((SchreierAffine(0), UniformAffine(1, 0)))
)


def is_eps(code) -> bool:
    while isinstance(code, (Shift, Restrict)):
        code = code.inner
    return code == EPS


# constructors with checks -----------------------------------------------


def restrict(code: Code, m: SetDescriptor) -> Code:
    if not m.is_infinite:
        raise BarrierError("restriction needs an infinite base")
    return Restrict(code, m)


def shift(code: Code, n: int) -> Code:
    if n < 0:
        raise BarrierError("negative shift")
    return _shift(code, n)


def cons(n: int, code: Code) -> Code:
    if n >= base_min(code):
        raise BaseClash(f"root {n} is not below the base of {to_text(code)}")
    return Cons(n, code)


def _shift(code: Code, n: int) -> Code:
    if n == 0 or is_eps(code):
        return code if n == 0 else EPS
    if isinstance(code, Shift):
        return Shift(code.inner, code.offset + n)
    return Shift(code, n)


def base_min(code: Code) -> int:
    if isinstance(code, Shift):
        return base_min(code.inner) + code.offset
    if isinstance(code, Cons):
        return code.root
    if isinstance(code, Restrict):
        lo = base_min(code.inner)
        for x in code.base:
            if x >= lo:
                return x
    return 0


def in_base(code: Code, x: int) -> bool:
    """Membership in the declared base; restrictions are not consulted."""
    if isinstance(code, Shift):
        return x >= code.offset and in_base(code.inner, x - code.offset)
    if isinstance(code, Cons):
        return x == code.root or in_base(code.inner, x)
    if isinstance(code, Restrict):
        return in_base(code.inner, x)
    return True


# the residual step ------------------------------------------------------


def _tail_code(rule: TailRule, n: int) -> Optional[Code]:
    if isinstance(rule, UniformAffine):
        return Uniform(rule.a * n + rule.b)
    if isinstance(rule, SchreierAffine):
        return Schreier(n + rule.c)
    if isinstance(rule, ConstCode):
        return rule.code
    return _tail_code(rule.rules[n % rule.modulus], n)


def glue_branch(code: Glue, n: int) -> Code:
    """The relative code of B[n] for a glued code."""
    if n < len(code.explicit):
        return code.explicit[n]
    return _tail_code(code.tail, n)


@lru_cache(maxsize=1 << 16)
def step(code: Code, x: int) -> Optional[Code]:
    if x < 0:
        return None
    if isinstance(code, Uniform):
        if code.k == 0:
            return None
        return _shift(Uniform(code.k - 1), x + 1)
    if isinstance(code, Schreier):
        size = x + code.k - 1
        if size < 0:
            return None
        return _shift(Uniform(size), x + 1)
    if isinstance(code, Glue):
        return _shift(glue_branch(code, x), x + 1)
    if isinstance(code, Shift):
        if x < code.offset:
            return None
        r = step(code.inner, x - code.offset)
        return None if r is None else _shift(r, code.offset)
    if isinstance(code, Restrict):
        if x not in code.base:
            return None
        r = step(code.inner, x)
        if r is None or is_eps(r):
            return r
        return Restrict(r, code.base)
    if isinstance(code, Cons):
        return code.inner if x == code.root else None
    raise TypeError(f"not a barrier code: {code!r}")


def residual(code: Code, s) -> Optional[Code]:
    r = code
    for x in s:
        r = step(r, x)
        if r is None:
            return None
    return r


def _check_base(code: Code, s) -> tuple:
    s = as_set(s)
    bad = [x for x in s if not in_base(code, x)]
    if bad:
        raise OffBase(f"{bad} outside the base of {to_text(code)}")
    return s


def contains(code: Code, s) -> bool:
    s = _check_base(code, s)
    r = residual(code, s)
    return r is not None and is_eps(r)


def tree_contains(code: Code, s) -> bool:
    s = _check_base(code, s)
    return residual(code, s) is not None


def sub_barrier(code: Code, s) -> Code:
    s = _check_base(code, s)
    r = residual(code, s)
    if r is None:
        raise NotInTree(f"{s} is not in T(B)")
    if is_eps(r):
        raise TerminalNode(f"{s} is an element of B")
    return r


# ranks ------------------------------------------------------------------


def _rule_sup(rule: TailRule) -> Ordinal:
    """Supremum of rank({n}) + 1 over the tail indices."""
    if isinstance(rule, UniformAffine):
        return sup_affine(rule.a, rule.b)
    if isinstance(rule, SchreierAffine):
        return succ(OMEGA)
    if isinstance(rule, ConstCode):
        return succ(rank(rule.code))
    return omax(*(_rule_sup(r) for r in rule.rules))


@lru_cache(maxsize=1 << 14)
def rank(code: Code) -> Ordinal:
    if isinstance(code, Uniform):
        return Ordinal.finite(code.k)
    if isinstance(code, Schreier):
        return OMEGA
    if isinstance(code, Shift):
        return rank(code.inner)
    if isinstance(code, Cons):
        return succ(rank(code.inner))
    if isinstance(code, Glue):
        parts = [succ(rank(c)) for c in code.explicit]
        parts.append(_rule_sup(code.tail))
        return omax(*parts)
    if isinstance(code, Restrict):
        if not is_uniform(code.inner):
            raise UnsupportedRestriction(
                f"rank of a restriction of non-uniform {to_text(code.inner)}"
            )
        return rank(code.inner)
    raise TypeError(f"not a barrier code: {code!r}")


def node_rank(code: Code, s) -> Ordinal:
    s = _check_base(code, s)
    r = residual(code, s)
    if r is None:
        raise NotInTree(f"{s} is not in T(B)")
    return rank(r)


def rank_or_below(code: Code, s) -> Ordinal:
    """node_rank, with BELOW_ZERO for sets outside the tree."""
    r = residual(code, as_set(s))
    return BELOW_ZERO if r is None else rank(r)


def _branch_ranks(code: Glue, upto: int) -> list:
    return [rank(glue_branch(code, n)) for n in range(upto)]


def _affine_slopes(rule: TailRule):
    if isinstance(rule, UniformAffine):
        return [rule.a]
    if isinstance(rule, Cases):
        return [r.a if isinstance(r, UniformAffine) else None for r in rule.rules]
    return [None]


def _glue_sequence_ok(code: Glue, strict: bool) -> bool:
    total = rank(code)
    m = len(code.explicit)
    period = code.tail.modulus if isinstance(code.tail, Cases) else 1
    seq = _branch_ranks(code, m + 3 * period + 2)
    if total.is_successor:
        beta = pred(total)
        return all(r == beta for r in seq)
    if any(b < a for a, b in zip(seq, seq[1:])):
        return False
    if strict and any(b <= a for a, b in zip(seq, seq[1:])):
        return False
    # periodic affine pieces stay monotone only with one common slope
    slopes = set(_affine_slopes(code.tail))
    if len(slopes) > 1:
        return False
    return True


@lru_cache(maxsize=1 << 12)
def is_uniform(code: Code, strict: bool = False) -> bool:
    """Hereditary uniformity; ``strict`` also demands strictly rising ranks."""
    if isinstance(code, Uniform):
        return True
    if isinstance(code, Schreier):
        return code.k >= 1
    if isinstance(code, (Shift, Restrict, Cons)):
        return is_uniform(code.inner, strict)
    if isinstance(code, Glue):
        m = len(code.explicit)
        period = code.tail.modulus if isinstance(code.tail, Cases) else 1
        for n in range(m + period):
            b = glue_branch(code, n)
            if isinstance(b, Schreier) and b.k == 0:
                return False
            if not is_uniform(b, strict):
                return False
        if isinstance(code.tail, ConstCode) and not is_uniform(code.tail.code, strict):
            return False
        return _glue_sequence_ok(code, strict)
    raise TypeError(f"not a barrier code: {code!r}")


# enumeration inside a window -------------------------------------------


def _dfs(code: Code, pool: tuple, depth: int, prefix=()) -> Iterator[tuple]:
    """Elements of B drawn from ``pool`` (sorted) in lexicographic order."""
    if is_eps(code):
        yield prefix
        return
    if len(prefix) >= depth:
        return
    for i, x in enumerate(pool):
        r = step(code, x)
        if r is None:
            continue
        yield from _dfs(r, pool[i + 1:], depth, prefix + (x,))


def elements(code: Code, w: Window) -> Iterator[tuple]:
    """Elements of B inside [0, bound) of size at most depth, lex order."""
    pool = tuple(x for x in range(w.bound) if in_base(code, x))
    return _dfs(code, pool, w.depth)


def elements_within(code: Code, support) -> Iterator[tuple]:
    """Elements of B that are subsets of ``support``."""
    pool = as_set(support)
    return _dfs(code, pool, len(pool))


def elements_on(code: Code, pool, depth: Optional[int] = None) -> Iterator[tuple]:
    pool = as_set(pool)
    return _dfs(code, pool, len(pool) if depth is None else depth)


def tree_nodes(code: Code, w: Window) -> Iterator[tuple]:
    """Nodes of T(B) inside [0, bound), prefix order."""

    def rec(r, lo, prefix):
        yield prefix
        if is_eps(r) or len(prefix) >= w.depth:
            return
        for x in range(lo, w.bound):
            nxt = step(r, x)
            if nxt is not None:
                yield from rec(nxt, x + 1, prefix + (x,))

    return rec(code, 0, ())


# structural verification -----------------------------------------------


def sperner_violations(code: Code, w: Window) -> Iterator[tuple]:
    for t in elements(code, w):
        for s in elements_within(code, t):
            if s != t:
                yield (s, t)


def verify_sperner(code: Code, w: Window) -> Verdict:
    for pair in sperner_violations(code, w):
        return Fail(pair)
    return PASS


def verify_cover(code: Code, w: Window) -> Verdict:
    """Every increasing sequence of length <= depth meets B or stays in T(B)."""

    def rec(r, lo, prefix):
        if len(prefix) >= w.depth:
            return None
        for x in range(lo, w.bound):
            nxt = step(r, x)
            here = prefix + (x,)
            if nxt is None:
                return here
            if is_eps(nxt):
                continue
            bad = rec(nxt, x + 1, here)
            if bad is not None:
                return bad
        return None

    if is_eps(code):
        return PASS
    bad = rec(code, base_min(code), ())
    return PASS if bad is None else Fail(bad)


def first_segment(code: Code, m: SetDescriptor, fuel: int) -> tuple:
    r = code
    taken = []
    for i, x in enumerate(m):
        if is_eps(r):
            return tuple(taken)
        if i >= fuel:
            break
        if not in_base(code, x):
            raise OffBase(f"{x} outside the base")
        r = step(r, x)
        taken.append(x)
        if r is None:
            raise FuelExhausted(f"{tuple(taken)} left T(B) before meeting B")
    if is_eps(r):
        return tuple(taken)
    raise FuelExhausted(f"no initial segment of the first {fuel} elements lies in B")


def end_replace(a, b) -> tuple:
    a, b = tuple(a), tuple(b)
    if len(b) >= len(a):
        raise SizeViolation("the replacing set must be shorter")
    out = a[: len(a) - len(b)] + b
    if any(x >= y for x, y in zip(out, out[1:])):
        raise NotIncreasing(f"{a} * {b} is not increasing")
    return out


def homogeneity_failures(code: Code, w: Window) -> Iterator[tuple]:
    """Triples (a, b, reason) breaking the end-replacement property."""
    for a in elements(code, w):
        n = len(a)
        if n == 0:
            continue
        rest = range(a[-1], w.bound)
        for k in range(n):
            for b in combinations(rest, k):
                try:
                    ab = end_replace(a, b)
                except NotIncreasing:
                    continue
                if residual(code, ab) is None:
                    yield (a, b, "a*b not in T(B)")
                r = residual(code, b)
                if r is not None and is_eps(r):
                    yield (a, b, "b in B")


def truncated_rank(code: Code, w: Window) -> Ordinal:
    """Rank of the finite tree T(B) restricted to [0, bound)."""

    @lru_cache(maxsize=None)
    def rec(r, lo):
        best = -1
        if is_eps(r):
            return 0
        for x in range(lo, w.bound):
            nxt = step(r, x)
            if nxt is not None:
                best = max(best, rec(nxt, x + 1) + 1)
        return max(best, 0)

    return Ordinal.finite(rec(code, 0))


def stabilization_point(code: Code, w: Window) -> Optional[int]:
    """Least m with B|[m,bound) = [m,bound)^k, k the finite rank of B."""
    k = rank(code)
    if not k.is_finite:
        raise RankMismatch("stabilization needs finite rank")
    k = k.finite_value()
    for m in range(w.bound):
        pool = range(m, w.bound)
        ok = True
        for size in range(0, min(k, w.bound - m) + 1):
            for s in combinations(pool, size):
                r = residual(code, s)
                if (r is not None and is_eps(r)) != (size == k):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return m
    return None


def _stable_from(r: Code, w: Window, lo: int) -> int:
    """A point past which the finite-rank residual ``r`` is a full power."""
    if isinstance(r, Shift) and isinstance(r.inner, Uniform):
        return r.offset
    if isinstance(r, Uniform):
        return 0
    if is_eps(r):
        return lo
    n = rank(r).finite_value()
    for a in elements_on(r, range(lo, w.bound), n):
        if len(a) == n:
            return a[-1] + 1
    raise FuelExhausted("window too small to locate a stabilization point")


def compress(xs) -> SetDescriptor:
    """Descriptor for a chosen increasing list; a run of consecutive
    numbers at the end (length >= 2) becomes a cofinite tail."""
    xs = list(xs)
    if len(xs) >= 2 and xs[-1] == xs[-2] + 1:
        j = len(xs) - 1
        while j > 0 and xs[j - 1] == xs[j] - 1:
            j -= 1
        return SetDescriptor(tuple(xs[:j]), Tail("cofinite", xs[j]))
    return finite_set(xs)


def uniformize_rank_omega(code: Code, w: Window) -> tuple:
    """Greedy M with rank({m_i}) >= i, ranks nondecreasing, spaced past
    each stabilization point.  Returns (descriptor, chosen list)."""
    if rank(code) != OMEGA:
        raise RankMismatch(f"rank is {rank(code)}, not w")
    chosen = []
    floor = 0
    lo = 0
    prev = ZERO
    i = 0
    while True:
        pick = None
        for m in range(lo, w.bound):
            if not in_base(code, m):
                continue
            r = step(code, m)
            if r is None:
                continue
            rk = rank(r)
            if rk >= i and rk >= prev:
                pick = (m, r, rk)
                break
        if pick is None:
            break
        m, r, rk = pick
        chosen.append(m)
        prev = rk
        floor = _stable_from(r, w, m + 1)
        lo = max(m + 1, floor)
        i += 1
    if len(chosen) < 2:
        raise FuelExhausted("window too small to uniformize")
    return compress(chosen), tuple(chosen)


def floor_rank_estimate(code: Code, bases, w: Window) -> Ordinal:
    """Least truncated rank over the given restrictions: an estimate only."""
    return min(truncated_rank(Restrict(code, m), w) for m in bases)


# text syntax ------------------------------------------------------------


def set_text(d: SetDescriptor) -> str:
    t = d.tail
    if not d.prefix:
        if t.kind == "cofinite":
            return "omega" if t.start == 0 else f"cof({t.start})"
        if t.kind == "arithmetic":
            if (t.start, t.step) == (0, 2):
                return "evens"
            if (t.start, t.step) == (1, 2):
                return "odds"
            return f"arith({t.start},{t.step})"
    head = "[" + ",".join(map(str, d.prefix)) + "]"
    if t.kind == "empty":
        return head
    if t.kind == "cofinite":
        return f"{head}+cof({t.start})"
    return f"{head}+arith({t.start},{t.step})"


def rule_text(rule: TailRule) -> str:
    if isinstance(rule, UniformAffine):
        return f"uniformAff({rule.a},{rule.b})"
    if isinstance(rule, SchreierAffine):
        return f"schreierAff({rule.c})"
    if isinstance(rule, ConstCode):
        return f"const({to_text(rule.code)})"
    return f"cases{rule.modulus}[" + ", ".join(rule_text(r) for r in rule.rules) + "]"


def to_text(code: Code) -> str:
    if isinstance(code, Uniform):
        return f"uniform({code.k})"
    if isinstance(code, Schreier):
        return f"schreier({code.k})"
    if isinstance(code, Glue):
        parts = [f"{i}: {to_text(c)}" for i, c in enumerate(code.explicit)]
        parts.append(f"tail: {rule_text(code.tail)}")
        return "glue{" + "; ".join(parts) + "}"
    if isinstance(code, Restrict):
        return f"restrict({to_text(code.inner)}, {set_text(code.base)})"
    if isinstance(code, Shift):
        return f"shift({to_text(code.inner)}, {code.offset})"
    if isinstance(code, Cons):
        return f"cons({code.root}, {to_text(code.inner)})"
    raise TypeError(f"not a barrier code: {code!r}")


_TOK = re.compile(r"\s*(?:([A-Za-z]+\d*)|(\d+)|([(){}\[\]:;,+]))")


class _Parser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOK.match(text, pos)
            if not m:
                raise CodeSyntaxError(f"unexpected input at {text[pos:]!r}")
            self.toks.append(m.group(1) or m.group(2) or m.group(3))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise CodeSyntaxError(f"expected {want or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def nat(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise CodeSyntaxError(f"expected a natural, got {tok!r}")
        return int(tok)

    def code(self) -> Code:
        head = self.take()
        if head == "uniform":
            self.take("(")
            k = self.nat()
            self.take(")")
            return Uniform(k)
        if head == "schreier":
            self.take("(")
            k = self.nat()
            self.take(")")
            return Schreier(k)
        if head == "glue":
            return self.glue()
        if head == "restrict":
            self.take("(")
            inner = self.code()
            self.take(",")
            base = self.setd()
            self.take(")")
            return restrict(inner, base)
        if head == "shift":
            self.take("(")
            inner = self.code()
            self.take(",")
            n = self.nat()
            self.take(")")
            return shift(inner, n)
        if head == "cons":
            self.take("(")
            n = self.nat()
            self.take(",")
            inner = self.code()
            self.take(")")
            return cons(n, inner)
        raise CodeSyntaxError(f"unknown code head {head!r}")

    def glue(self) -> Glue:
        self.take("{")
        explicit = {}
        tail = None
        while True:
            tok = self.peek()
            if tok == "tail":
                self.take()
                self.take(":")
                tail = self.rule()
            else:
                n = self.nat()
                self.take(":")
                if n in explicit:
                    raise CodeSyntaxError(f"index {n} given twice")
                explicit[n] = self.code()
            if self.peek() == ";":
                self.take()
                continue
            break
        self.take("}")
        if tail is None:
            raise CodeSyntaxError("glue needs a tail rule")
        if sorted(explicit) != list(range(len(explicit))):
            raise CodeSyntaxError("explicit indices must be exactly 0..m-1")
        return Glue(tuple(explicit[i] for i in range(len(explicit))), tail)

    def rule(self) -> TailRule:
        head = self.take()
        if head == "uniformAff":
            self.take("(")
            a = self.nat()
            self.take(",")
            b = self.nat()
            self.take(")")
            return UniformAffine(a, b)
        if head == "schreierAff":
            self.take("(")
            c = self.nat()
            self.take(")")
            return SchreierAffine(c)
        if head == "const":
            self.take("(")
            c = self.code()
            self.take(")")
            return ConstCode(c)
        m = re.fullmatch(r"cases(\d+)", head)
        if m:
            self.take("[")
            rules = [self.rule()]
            while self.peek() == ",":
                self.take()
                rules.append(self.rule())
            self.take("]")
            if len(rules) != int(m.group(1)):
                raise CodeSyntaxError("cases modulus disagrees with rule count")
            return Cases(tuple(rules))
        raise CodeSyntaxError(f"unknown tail rule {head!r}")

    def setd(self) -> SetDescriptor:
        tok = self.peek()
        if tok == "[":
            self.take()
            prefix = []
            while self.peek() != "]":
                prefix.append(self.nat())
                if self.peek() == ",":
                    self.take()
            self.take("]")
            if self.peek() == "+":
                self.take()
                tail = self.setd()
                if tail.prefix:
                    raise CodeSyntaxError("tail may not carry its own prefix")
                return SetDescriptor(tuple(prefix), tail.tail)
            return SetDescriptor(tuple(prefix), Tail("empty"))
        head = self.take()
        if head == "omega":
            return SetDescriptor((), Tail("cofinite", 0))
        if head == "evens":
            return SetDescriptor((), Tail("arithmetic", 0, 2))
        if head == "odds":
            return SetDescriptor((), Tail("arithmetic", 1, 2))
        if head == "cof":
            self.take("(")
            n = self.nat()
            self.take(")")
            return SetDescriptor((), Tail("cofinite", n))
        if head == "arith":
            self.take("(")
            a = self.nat()
            self.take(",")
            d = self.nat()
            self.take(")")
            return SetDescriptor((), Tail("arithmetic", a, d))
        raise CodeSyntaxError(f"unknown set {head!r}")

    def done(self):
        if self.peek() is not None:
            raise CodeSyntaxError(f"trailing input {self.toks[self.i:]}")


def parse_code(text: str) -> Code:
    p = _Parser(text)
    c = p.code()
    p.done()
    return c


def parse_set(text: str) -> SetDescriptor:
    p = _Parser(text)
    d = p.setd()
    p.done()
    return d


# JSON -------------------------------------------------------------------


def rule_to_json(rule: TailRule):
    if isinstance(rule, UniformAffine):
        return {"kind": "uniformAff", "a": rule.a, "b": rule.b}
    if isinstance(rule, SchreierAffine):
        return {"kind": "schreierAff", "c": rule.c}
    if isinstance(rule, ConstCode):
        return {"kind": "const", "code": to_json(rule.code)}
    return {"kind": "cases", "rules": [rule_to_json(r) for r in rule.rules]}


def rule_from_json(data) -> TailRule:
    kind = data["kind"]
    if kind == "uniformAff":
        return UniformAffine(data["a"], data["b"])
    if kind == "schreierAff":
        return SchreierAffine(data["c"])
    if kind == "const":
        return ConstCode(from_json(data["code"]))
    if kind == "cases":
        return Cases(tuple(rule_from_json(r) for r in data["rules"]))
    raise CodeSyntaxError(f"unknown tail rule kind {kind!r}")


def to_json(code: Code):
    if isinstance(code, Uniform):
        return {"kind": "uniform", "k": code.k}
    if isinstance(code, Schreier):
        return {"kind": "schreier", "k": code.k}
    if isinstance(code, Glue):
        return {
            "kind": "glue",
            "explicit": [to_json(c) for c in code.explicit],
            "tail": rule_to_json(code.tail),
        }
    if isinstance(code, Restrict):
        return {"kind": "restrict", "inner": to_json(code.inner), "base": code.base.to_json()}
    if isinstance(code, Shift):
        return {"kind": "shift", "inner": to_json(code.inner), "offset": code.offset}
    if isinstance(code, Cons):
        return {"kind": "cons", "root": code.root, "inner": to_json(code.inner)}
    raise TypeError(f"not a barrier code: {code!r}")


def from_json(data) -> Code:
    kind = data["kind"]
    if kind == "uniform":
        return Uniform(data["k"])
    if kind == "schreier":
        return Schreier(data["k"])
    if kind == "glue":
        return Glue(tuple(from_json(c) for c in data["explicit"]), rule_from_json(data["tail"]))
    if kind == "restrict":
        return restrict(from_json(data["inner"]), SetDescriptor.from_json(data["base"]))
    if kind == "shift":
        return shift(from_json(data["inner"]), data["offset"])
    if kind == "cons":
        return cons(data["root"], from_json(data["inner"]))
    raise CodeSyntaxError(f"unknown code kind {kind!r}")
