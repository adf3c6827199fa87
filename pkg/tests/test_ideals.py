"""Hechler trees, FIN^B, G_c(B), Katetov shrinking and ad stages."""
from itertools import combinations, product
import random

import pytest
from hypothesis import given, settings, strategies as st

from barriers.barrier import RankMismatch, Schreier, Uniform, contains
from barriers.embed import RankOrderViolated
from barriers.ideals import (
    FinDescriptor,
    FnTable,
    HechlerTree,
    NotInIdeal,
    ShrinkCertificate,
    WindowExhausted,
    ad_stage,
    canonical_enumeration,
    e_up,
    extends_prec,
    fin_contains,
    fn_from_tree,
    full_tree,
    gc_positive,
    hechler_avoiding,
    hechler_dominating,
    katetov_shrink_bruteforce,
    katetov_shrink_recursive,
    random_map,
    root_tree,
    selective_branch_set,
    seq_at,
    seq_index,
    tree_from_fn,
    verify_branch_set,
    verify_noCseq_hypotheses,
    verify_shrink,
)
from barriers.ramsey import NotFoundInWindow
from barriers.sets import SetDescriptor, Tail, Window, evens, odds, omega


def brute_members(code, bound, max_size):
    for size in range(max_size + 1):
        for s in combinations(range(bound), size):
            if contains(code, s):
                yield s


# canonical enumeration -------------------------------------------------


def key_sorted(limit):
    """All sequences with max + length <= limit, sorted by that sum then lex."""
    seqs = [()]
    for length in range(1, limit + 1):
        for s in product(range(limit), repeat=length):
            if max(s) + length <= limit:
                seqs.append(s)
    return sorted(seqs, key=lambda s: (-1, ()) if not s else (max(s) + len(s), s))


def test_enumeration_matches_key_sort():
    oracle = key_sorted(6)
    assert canonical_enumeration(len(oracle)) == oracle


def test_enumeration_examples():
    first = canonical_enumeration(6)
    assert first[0] == ()
    assert first[:5] == [(), (0,), (0, 0), (1,), (0, 0, 0)]
    assert first[5] == (0, 1)
    order = canonical_enumeration(400)
    assert order.index((0, 1)) < order.index((0, 2))


def test_enumeration_extends_prec():
    assert extends_prec(300)


@given(st.integers(0, 5000))
def test_index_inverse(i):
    assert seq_index(seq_at(i)) == i


def test_index_of_singleton_five():
    assert seq_at(seq_index((5,))) == (5,)
    assert canonical_enumeration(seq_index((5,)) + 1)[-1] == (5,)


# function tables and trees ---------------------------------------------


def test_zero_table_is_full_tree():
    t = tree_from_fn(FnTable((), 0))
    assert t.agrees_with(full_tree(), Window(8, 3))
    assert fn_from_tree(t, 50) == FnTable((0,) * 50, 0)


def test_root_three_table():
    f = FnTable((3,), 0)
    t = tree_from_fn(f)
    assert t.successors((), 8) == (3, 4, 5, 6, 7)
    g = fn_from_tree(t, 50)
    assert g(0) == 3 and all(g(i) == 0 for i in range(1, 50))
    assert tree_from_fn(g).agrees_with(t, Window(8, 3))


def test_explicit_tree_table():
    t = HechlerTree(explicit={(): 2, (5,): 7})
    g = fn_from_tree(t, 300)
    nonzero = [i for i in range(400) if g(i)]
    assert nonzero == [seq_index(()), seq_index((5,))]
    assert g(seq_index((5,))) == 7


def test_explicit_nodes_prefix_closed():
    with pytest.raises(ValueError):
        HechlerTree(explicit={(3, 5): 1})


tables = st.builds(
    lambda vals, d: FnTable(tuple(vals), d),
    st.lists(st.integers(0, 4), max_size=40),
    st.integers(0, 2),
)


@settings(max_examples=200)
@given(tables)
def test_table_round_trip(f):
    g = fn_from_tree(tree_from_fn(f), 60)
    # canonical form is a fixed point
    assert fn_from_tree(tree_from_fn(g), 60) == g
    t = tree_from_fn(f)
    assert tree_from_fn(g).agrees_with(t, Window(7, 3))
    for i, s in enumerate(canonical_enumeration(60)):
        assert g(i) == (f(i) if t.contains(s) else 0)


@given(tables)
def test_tree_json_round_trip(f):
    t = tree_from_fn(f)
    assert HechlerTree.from_json(t.to_json()) == t


# avoiding trees --------------------------------------------------------


def oracle_avoids(code, x, h, bound, max_size):
    return all(not (fin_contains(x, b) and h.contains(b))
               for b in brute_members(code, bound, max_size))


def test_avoid_two_columns():
    x = FinDescriptor(columns=(0, 1))
    h = hechler_avoiding(Uniform(2), x, Window(16))
    assert h.threshold(()) == 2
    assert oracle_avoids(Uniform(2), x, h, 16, 2)


def test_avoid_empty_set():
    h = hechler_avoiding(Uniform(2), FinDescriptor(), Window(10))
    assert h.agrees_with(full_tree(), Window(10, 3))


def test_avoid_schreier_explicit():
    x = FinDescriptor(explicit=((1, 3), (2, 4, 7)))
    h = hechler_avoiding(Schreier(1), x, Window(12))
    assert not h.contains((1, 3)) and not h.contains((2, 4, 7))
    assert oracle_avoids(Schreier(1), x, h, 12, 6)


def test_avoid_outside_ideal():
    with pytest.raises(NotInIdeal):
        hechler_avoiding(Uniform(2), FinDescriptor(columns_from=3), Window(10))


fin_descriptors = st.builds(
    lambda ex, cols, pc: FinDescriptor(tuple(ex), tuple(cols), pc),
    st.lists(st.lists(st.integers(0, 9), min_size=2, max_size=2, unique=True)
             .map(lambda xs: tuple(sorted(xs))), max_size=4),
    st.lists(st.integers(0, 6), max_size=2),
    st.dictionaries(st.integers(0, 6),
                    st.builds(lambda cs: FinDescriptor(columns=tuple(cs)),
                              st.lists(st.integers(1, 8), max_size=2)),
                    max_size=2),
)


@settings(max_examples=60, deadline=None)
@given(fin_descriptors)
def test_avoiding_postcondition(x):
    h = hechler_avoiding(Uniform(2), x, Window(10))
    assert oracle_avoids(Uniform(2), x, h, 10, 2)
    assert FinDescriptor.from_json(x.to_json()) == x


# domination ------------------------------------------------------------


def test_dominate_single_tree():
    t = root_tree(3)
    dom = hechler_dominating([t], Uniform(2), Window(12))
    assert dom.bounds == (0,)
    for b in brute_members(Uniform(2), 12, 2):
        if dom.tree.contains(b):
            assert t.contains(b)


def test_dominate_full_trees():
    dom = hechler_dominating([full_tree(), full_tree()], Uniform(2), Window(10))
    assert dom.tree.agrees_with(full_tree(), Window(10, 3))
    assert dom.bounds == (0, 0)


def test_dominate_two_roots():
    trees = [root_tree(3), root_tree(5)]
    dom = hechler_dominating(trees, Uniform(2), Window(14))
    assert dom.tree.threshold(()) == 6
    for t, n in zip(trees, dom.bounds):
        for b in brute_members(Uniform(2), 14, 2):
            if dom.tree.contains(b) and not t.contains(b):
                assert b[0] <= n


# G_c positivity --------------------------------------------------------


def oracle_inside(code, x, s, max_size):
    return all(s(b) for size in range(max_size + 1)
               for b in combinations(x, size) if contains(code, b))


def test_gc_whole_family():
    res = gc_positive(Uniform(2), lambda b: 1, Window(10), 3)
    assert res.kind == "Positive" and res.x == tuple(range(10))


def test_gc_without_column_zero():
    s = lambda b: b[0] != 0  # noqa: E731
    res = gc_positive(Uniform(2), s, Window(10), 3)
    assert res.x == tuple(range(1, 10))
    assert oracle_inside(Uniform(2), res.x, s, 2)


def test_gc_even_sums():
    s = lambda b: sum(b) % 2 == 0  # noqa: E731
    res = gc_positive(Uniform(2), s, Window(18), 4)
    assert res.kind == "Positive" and len(res.x) >= 4
    assert oracle_inside(Uniform(2), res.x, s, 2)


def test_gc_negative():
    res = gc_positive(Uniform(1), lambda b: 0, Window(8), 2)
    assert res.kind == "NegativeInWindow"


# Katetov shrinking -----------------------------------------------------


def diag(b):
    return (b[0], b[0] + 1)


def test_shrink_diagonal_pairs():
    f = diag
    cert = katetov_shrink_recursive(Uniform(1), Uniform(2), f, Window(20))
    assert cert.kind == "HechlerDisjoint"
    assert verify_shrink(cert, Uniform(1), Uniform(2), f)
    for x in cert.x:
        assert not cert.tree.contains(diag((x,)))


def test_shrink_constant_map():
    f = lambda b: (3, 7)  # noqa: E731
    cert = katetov_shrink_recursive(Uniform(1), Uniform(2), f, Window(12))
    assert cert.kind == "ColumnBounded" and cert.n == 3
    assert cert.x == tuple(range(12))
    assert verify_shrink(cert, Uniform(1), Uniform(2), f)


def test_shrink_column_zero():
    f = lambda b: (0, b[0] + 1)  # noqa: E731
    cert = katetov_shrink_recursive(Uniform(1), Uniform(2), f, Window(12))
    assert cert.kind == "ColumnBounded" and cert.n == 0
    assert verify_shrink(cert, Uniform(1), Uniform(2), f)


def test_shrink_rank_order():
    with pytest.raises(RankOrderViolated):
        katetov_shrink_bruteforce(Uniform(2), Uniform(1), lambda b: (b[0],), Window(8))


def test_bruteforce_examples():
    for f in (diag, lambda b: (3, 7), lambda b: (0, b[0] + 1)):
        cert = katetov_shrink_bruteforce(Uniform(1), Uniform(2), f, Window(12))
        assert verify_shrink(cert, Uniform(1), Uniform(2), f)


def test_tampered_certificate_fails():
    cert = katetov_shrink_recursive(Uniform(1), Uniform(2), diag, Window(16))
    bad = ShrinkCertificate(cert.x, "ColumnBounded", cert.window, n=0, headroom=1)
    assert not verify_shrink(bad, Uniform(1), Uniform(2), diag)
    again = ShrinkCertificate.from_json(cert.to_json())
    assert verify_shrink(again, Uniform(1), Uniform(2), diag)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.booleans(),
       st.sampled_from([(Uniform(1), Uniform(2)), (Uniform(1), Schreier(1)), (Uniform(2), Uniform(3))]))
def test_recursive_matches_bruteforce(seed, spread, pair):
    B, C = pair
    w = Window(10)
    f = random_map(B, C, w, seed, spread)
    try:
        brute = katetov_shrink_bruteforce(B, C, f, w)
    except NotFoundInWindow:
        return
    assert verify_shrink(brute, B, C, f)
    rec = katetov_shrink_recursive(B, C, f, w)
    assert verify_shrink(rec, B, C, f)


# E-up and ad stages ----------------------------------------------------


def test_e_up_examples():
    up = e_up(Uniform(2), omega(), Window(10))
    assert up((3,)) and up((3, 5)) and not up((3, 5, 7))
    assert e_up(Uniform(2), evens(), Window(10))((2, 6))
    assert e_up(Schreier(1), odds(), Window(12))((3, 5, 7))


def test_ad_stage_no_priors():
    cert = ad_stage(Uniform(2), [], [], omega(), Window(12, 4))
    assert cert.ok
    assert cert.a_new[:3] == ((0, 1), (1, 2), (2, 3))
    assert [c[0] for c in cert.a_new] == sorted({c[0] for c in cert.a_new})


def test_ad_stage_avoids_prior_column_zero():
    prior = [((0, 1), (0, 2), (0, 3))]
    cert = ad_stage(Uniform(2), prior, [], omega(), Window(12, 4))
    assert cert.ok
    meet = set(cert.a_new) & set(prior[0])
    assert all(c[0] <= cert.bounds[0] for c in meet)
    assert not meet


def test_ad_stage_inside_evens():
    cert = ad_stage(Uniform(2), [], [], evens(), Window(16, 4))
    assert cert.ok
    assert all(x % 2 == 0 for c in cert.a_new for x in c)


def test_ad_stage_with_current_map():
    w = Window(16)
    shrink = katetov_shrink_recursive(Uniform(1), Uniform(2), diag, w)
    image = shrink.image(Uniform(1), diag)
    cert = ad_stage(Uniform(2), [], [(shrink, image)], omega(), Window(20, 4),
                    current=(shrink, Uniform(1), diag))
    assert cert.ok
    assert [c[0] for c in cert.checks] == ["1", "3", "4", "5"]
    assert not set(cert.a_new) & set(image)


def test_ad_stage_exhausted():
    with pytest.raises(WindowExhausted):
        ad_stage(Uniform(2), [], [], omega(), Window(4, 4), need=8)


# branch sets -----------------------------------------------------------


def test_branch_set_full_tree():
    assert selective_branch_set(full_tree(), Window(8, 3)) == tuple(range(8))


def test_branch_set_root_threshold():
    t = root_tree(4)
    assert selective_branch_set(t, Window(10, 3)) == tuple(range(4, 10))


def test_branch_set_growing_thresholds():
    t = HechlerTree(default=0, fn=FnTable((), 0), explicit={(): 1, (1,): 4, (1, 4): 9})
    a = selective_branch_set(t, Window(14, 4))
    assert verify_branch_set(t, a, min(len(a), 8))
    # independent check over every increasing subsequence
    for k in range(1, min(len(a), 8) + 1):
        for s in combinations(a, k):
            assert all(s[j] >= t.threshold(s[:j]) for j in range(k))


# noCseq hypotheses -----------------------------------------------------


def test_noCseq_pass_on_grid():
    grid = [omega(), evens(), odds()]
    family = []
    for e in grid:
        family.append(ad_stage(Uniform(2), family, [], e, Window(20, 4)).a_new)
    assert verify_noCseq_hypotheses(Uniform(2), family, Window(20), grid)


def test_noCseq_column_defect():
    v = verify_noCseq_hypotheses(Uniform(2), [((3, 4), (3, 5))], Window(10), [])
    assert not v and v.witness == ("column", 0, 3)


def test_noCseq_uncovered():
    v = verify_noCseq_hypotheses(Uniform(2), [], Window(10), [evens()])
    assert not v and v.witness[0] == "uncovered"
