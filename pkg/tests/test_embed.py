"""Embedding comparison and double-arrow witnesses."""
from itertools import product

import pytest

from barriers.barrier import OMEGA_PLUS_ONE, Schreier, Uniform, contains, elements_on, tree_contains
from barriers.embed import (
    DoubleArrowWitness,
    NotUniform,
    RankOrderViolated,
    compare_embedding,
    compose,
    double_arrow_witness,
    double_arrow_witness_rank_omega,
    recheck_phase_log,
    verify_composition,
    verify_double_arrow,
)
from barriers.barrier import RankMismatch
from barriers.sets import Window


# independent checker: enumerate thinned sets directly


def f_of(bps, n):
    i = -1
    for j, k in enumerate(bps):
        if k <= n:
            i = j
    return max(i, 0)


def has_prefix_in(code, s):
    return any(contains(code, s[:i]) for i in range(len(s) + 1))


def thinned_sets(bps, bound, parity):
    """Maximal N with one point in each interval of the given parity."""
    edges = list(bps) + [bound]
    choices = []
    for i in range(len(bps)):
        if i % 2 != parity:
            continue
        lo, hi = edges[i], min(edges[i + 1], bound)
        if lo < hi:
            choices.append(range(lo, hi))
    return product(*choices)


def oracle_verify(bps, codeB, codeC, bound):
    for parity in (0, 1):
        for n in thinned_sets(bps, bound, parity):
            for b in elements_on(codeB, n):
                if not b:
                    continue
                img = tuple(f_of(bps, x) for x in b)
                if len(set(img)) != len(img) or not has_prefix_in(codeC, img):
                    return b
    return None


# compare_embedding -----------------------------------------------------


def test_compare_singletons_below_pairs():
    assert compare_embedding(Uniform(1), Uniform(2), Window(6, 4)).kind == "BleqC"


def test_compare_pairs_below_schreier():
    res = compare_embedding(Uniform(2), Schreier(1), Window(12, 4))
    assert res.kind == "BleqC"
    assert min(res.witness) >= 1
    for b in elements_on(Uniform(2), res.witness):
        assert tree_contains(Schreier(1), b)


def test_compare_equal_barriers():
    res = compare_embedding(Uniform(2), Uniform(2), Window(8, 8))
    assert res.kind == "BleqC"
    assert res.witness == tuple(range(8))


def test_compare_reverse_direction():
    res = compare_embedding(Uniform(3), Uniform(1), Window(8, 4))
    assert res.kind == "CleqB"


# double_arrow_witness --------------------------------------------------


pairs = [
    (Uniform(2), Uniform(1)),
    (Schreier(1), Uniform(3)),
    (Schreier(1), Schreier(1)),
    (Uniform(2), Uniform(2)),
    (Uniform(3), Uniform(2)),
]


@pytest.mark.parametrize("B,C", pairs, ids=lambda c: str(c))
def test_synthesized_witness_verifies(B, C):
    wit = double_arrow_witness(B, C, steps=4)
    assert wit.breakpoints == sorted(wit.breakpoints)
    assert verify_double_arrow(wit, B, C, Window(24))
    assert recheck_phase_log(wit, B, C)
    assert oracle_verify(wit.breakpoints, B, C, 20) is None


def test_schreier_to_uniform3_first_breakpoint():
    wit = double_arrow_witness(Schreier(1), Uniform(3), steps=4)
    # least admissible a_0 is 2 (ledger); its node rank already matches C
    assert wit.breakpoints[0] == 2


def test_witness_errors():
    with pytest.raises(RankOrderViolated):
        double_arrow_witness(Uniform(1), Uniform(2))
    with pytest.raises(NotUniform):
        double_arrow_witness(OMEGA_PLUS_ONE, Uniform(2))


def test_sampled_verification():
    wit = double_arrow_witness(Schreier(1), Schreier(1), steps=4)
    assert verify_double_arrow(wit, Schreier(1), Schreier(1), Window(30), samples=50)


def test_json_round_trip():
    wit = double_arrow_witness(Schreier(1), Uniform(3), steps=3)
    again = DoubleArrowWitness.from_json(wit.to_json())
    assert again.breakpoints == wit.breakpoints
    assert again.phase_log == wit.phase_log


# rank omega ------------------------------------------------------------


def test_rank_omega_breakpoints():
    wit = double_arrow_witness_rank_omega(Schreier(1), Window(30))
    assert wit.breakpoints[:10] == [i + 1 for i in range(10)]
    wit = double_arrow_witness_rank_omega(Schreier(2), Window(30))
    assert wit.breakpoints[:10] == list(range(10))


def test_rank_omega_verifies():
    for B in (Schreier(1), Schreier(2)):
        wit = double_arrow_witness_rank_omega(B, Window(30))
        assert verify_double_arrow(wit, B, Schreier(1), Window(20))
        assert verify_double_arrow(wit, B, Schreier(1), Window(30), samples=20)
        assert recheck_phase_log(wit, B, Schreier(1))


def test_rank_omega_mismatch():
    with pytest.raises(RankMismatch):
        double_arrow_witness_rank_omega(Uniform(3), Window(10))


# corrupted witnesses and composition ----------------------------------


def test_corrupted_breakpoints_fail():
    wit = double_arrow_witness(Schreier(1), Uniform(3), steps=4)
    bad = DoubleArrowWitness([1] + wit.breakpoints[1:])
    v = verify_double_arrow(bad, Schreier(1), Uniform(3), Window(24))
    assert not v
    b, img = v.witness[:2]
    assert not has_prefix_in(Uniform(3), img)
    assert oracle_verify(bad.breakpoints, Schreier(1), Uniform(3), 24) is not None


def test_tampered_phase_log_detected():
    wit = double_arrow_witness(Schreier(1), Uniform(3), steps=3)
    entry = next(e for e in wit.phase_log if e.get("lhs") is not None)
    entry["lhs"] = "0"
    assert not recheck_phase_log(wit, Schreier(1), Uniform(3))


def test_composition_verifies():
    f = double_arrow_witness(Schreier(1), Uniform(3), steps=4)
    g = double_arrow_witness(Uniform(3), Uniform(2), steps=4)
    assert verify_composition(f, g, Schreier(1), Uniform(2), Window(20))
    h = compose(f, g, 20)
    for n in range(20):
        assert h.f(n) == g.f(f.f(n))
