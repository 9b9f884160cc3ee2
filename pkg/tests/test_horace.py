import itertools
import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from postulate.horace import (
    ADMISSIBLE_EFG,
    CASE_BY_LENGTHS,
    DIFFERENTIAL_CASES,
    SIMPLE_TRACE_CASES,
    LemmaVerdict,
    Outcome,
    StarScheme,
    VirtualComponent,
    decompose_beta,
    degenerate,
    differential_lengths,
    layer_sum,
    lemma_2_4_bound,
    lemma_c1_check,
    lemma_inputs,
    lemma_threshold,
    max_specialized_trace,
    residual,
    trace_and_residual,
)
from postulate.interpolation import assign_integer_supports, check_postulation
from postulate.schemes import FatPointComponent, FatPointScheme, Support, hyperplane_residual


def test_case_lengths():
    assert CASE_BY_LENGTHS == {
        (1, 3): "i", (1, 6, 3): "ii", (3, 6, 1): "iii",
        (1, 10, 6, 3): "iv", (3, 10, 6, 1): "v", (6, 10, 3, 1): "vi",
    }
    assert SIMPLE_TRACE_CASES == {"i", "ii", "iv"}


@pytest.mark.parametrize("case", sorted(DIFFERENTIAL_CASES))
def test_layer_conservation(case):
    m, _ = DIFFERENTIAL_CASES[case]
    assert sum(differential_lengths(case)) == comb(m + 2, 3)
    assert VirtualComponent.differential(case).degree == VirtualComponent.plain(m).degree


def test_trace_and_residual():
    assert trace_and_residual(4) == (10, VirtualComponent((3, 2, 1)))
    trace, rest = trace_and_residual(VirtualComponent.differential("iv"))
    assert trace == 1 and rest.lengths == (10, 6, 3)
    assert trace_and_residual(1) == (1, None)
    with pytest.raises(ValueError):
        trace_and_residual(VirtualComponent(()))


def test_decompose_beta_bijection():
    images = [decompose_beta(b) for b in range(10)]
    assert sorted(images) == sorted(ADMISSIBLE_EFG)
    assert all(6 * e + 3 * f + g == b for b, (e, f, g) in enumerate(images))
    assert decompose_beta(5) == (0, 1, 2) and decompose_beta(9) == (1, 1, 0)
    for bad in (-1, 10):
        with pytest.raises(ValueError):
            decompose_beta(bad)


def test_lemma_examples():
    assert lemma_c1_check(14, 11, 0, 0, 0, 0, 0, 0) is LemmaVerdict.HOLDS
    assert lemma_c1_check(14, 11, 0, 0, 0, 1, 1, 0) is LemmaVerdict.HOLDS
    assert lemma_c1_check(3, 1, 0, 0, 0, 0, 0, 0) is LemmaVerdict.HOLDS
    assert lemma_c1_check(14, 13, 0, 0, 0, 0, 0, 0) is LemmaVerdict.HYPOTHESIS_NOT_MET
    assert lemma_c1_check(11, 1, 0, 0, 0, 0, 0, 1) is LemmaVerdict.HYPOTHESIS_NOT_MET
    assert (lemma_threshold(0, 0, 0), lemma_threshold(0, 1, 1), lemma_threshold(1, 1, 0), lemma_threshold(1, 0, 2)) == (3, 12, 12, 14)
    with pytest.raises(ValueError):
        lemma_c1_check(20, 0, 0, 0, 0, 0, 0, 3)
    with pytest.raises(ValueError):
        lemma_c1_check(20, -1, 0, 0, 0, 0, 0, 0)


@pytest.mark.parametrize("t", range(3, 61))
def test_lemma_grid(t):
    cap = comb(t + 2, 2)
    step = max(1, cap // 400)
    for e, f, g in ADMISSIBLE_EFG:
        if t < lemma_threshold(e, f, g):
            continue
        room = cap - 6 * e - 3 * f - g
        for a in range(0, room // 10 + 1, max(1, step // 4)):
            for b in range(0, (room - 10 * a) // 6 + 1, step):
                c = (room - 10 * a - 6 * b) // 3
                assert lemma_c1_check(t, a, b, c, 0, e, f, g) is not LemmaVerdict.FAILS
                u = room - 10 * a - 6 * b
                assert lemma_c1_check(t, a, b, 0, u, e, f, g) is not LemmaVerdict.FAILS


def test_lemma_2_4_bound():
    assert lemma_2_4_bound(5, 3, 3, 2) == 3
    assert lemma_2_4_bound(6, 3, 3, 2) is None
    assert lemma_2_4_bound(5, 4, 3, 2) is None
    with pytest.raises(ValueError):
        lemma_2_4_bound(-1, 0, 0, 0)


@pytest.mark.parametrize("seed", range(4))
def test_lemma_2_4_against_interpolation(seed):
    # Y: some fat points on and off H = {x_3 = 0}, Z: two general points of H
    rng = random.Random(seed)
    t = rng.randint(3, 5)
    y = FatPointScheme.general(3, {2: rng.randint(1, 3), 3: rng.randint(0, 1)})
    y = y.union(FatPointScheme.general(3, {2: rng.randint(0, 2)}, Support.ON_HYPERPLANE))
    y = assign_integer_supports(y, seed)
    z_points = assign_integer_supports(FatPointScheme.general(3, {1: 2}, Support.ON_HYPERPLANE), seed + 100)
    h0_y = check_postulation(y, t).h0
    h0_res = check_postulation(hyperplane_residual(y), t - 1).h0
    gamma = max(h0_res, h0_y - 2)
    bound = lemma_2_4_bound(h0_y, h0_res, gamma, 2)
    assert bound == gamma
    assert check_postulation(y.union(z_points), t).h0 <= bound


def _knapsack_brute(beta, c4, c3, c2):
    best = None
    for k4 in range(c4 + 1):
        for k3 in range(c3 + 1):
            for k2 in range(c2 + 1):
                v = 10 * k4 + 6 * k3 + 3 * k2
                if v <= beta and (best is None or (v, k4, k3) > (best[0], best[1], best[2])):
                    best = (v, k4, k3, k2)
    return best


@given(st.integers(0, 80), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_max_specialized_trace_is_optimal(beta, c4, c3, c2):
    k4, k3, k2 = max_specialized_trace(beta, c4, c3, c2)
    assert 0 <= k4 <= c4 and 0 <= k3 <= c3 and 0 <= k2 <= c2
    value = 10 * k4 + 6 * k3 + 3 * k2
    assert value <= beta
    assert value == _knapsack_brute(beta, c4, c3, c2)[0]


def test_max_specialized_trace_exhaustive_small():
    for beta, c4, c3, c2 in itertools.product(range(40), range(5), range(5), range(5)):
        k = max_specialized_trace(beta, c4, c3, c2)
        assert (10 * k[0] + 6 * k[1] + 3 * k[2],) + k == _knapsack_brute(beta, c4, c3, c2)


def test_degenerate_twelve_quartuple_points():
    step = degenerate(StarScheme(14, c4=12))
    assert step.outcome is Outcome.TYPE_I and step.moved == (12, 0, 0)
    assert step.efg == (0, 0, 0)
    assert step.scheme.trace_degree == 120
    assert layer_sum(step.scheme.on_h, 1) == 72 <= comb(15, 2)


def _filler(total):
    """Plain 4- and 3-points on H with trace degree ``total`` (plus simple points)."""
    a, rest = divmod(total, 10)
    return StarScheme(14, ((VirtualComponent.plain(4), a),), simple_on_h=rest)


def test_degenerate_one_double_point_fills():
    base = _filler(119)
    step = degenerate(StarScheme(14, base.on_h, c2=1, simple_on_h=base.simple_on_h))
    assert step.outcome is Outcome.TYPE_I and step.beta == 1 and step.efg == (0, 0, 1)
    assert step.applications == (("i", 1),)
    assert step.scheme.trace_degree == 120


def test_degenerate_one_double_point_leaves_slack():
    base = _filler(118)
    step = degenerate(StarScheme(14, base.on_h, c2=1, simple_on_h=base.simple_on_h))
    assert step.outcome is Outcome.TYPE_II and step.beta == 2
    assert step.scheme.off_h_count == 0
    assert step.scheme.trace_degree == 119 < 120


def test_degenerate_nothing_off_plane_is_type_ii():
    step = degenerate(_filler(100))
    assert step.outcome is Outcome.TYPE_II and step.efg is None


def test_degenerate_rejects_overfull_trace():
    with pytest.raises(ValueError):
        degenerate(_filler(121))


@given(st.integers(3, 30), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40), st.integers(0, 60))
def test_degenerate_invariants(t, c4, c3, c2, preload):
    cap = comb(t + 2, 2)
    base = _filler(min(preload, cap))
    y = StarScheme(t, base.on_h, c2=c2, c3=c3, c4=c4, simple_on_h=base.simple_on_h)
    step = degenerate(y)
    x = step.scheme
    assert x.degree == y.degree
    assert x.trace_degree <= cap
    d2, d3, d4 = step.off_h_at_decision
    if d2:
        assert step.beta < 3
    elif d3:
        assert step.beta < 6
    elif d4:
        assert step.beta < 10
    if step.outcome is Outcome.TYPE_I:
        assert x.trace_degree == cap
    else:
        assert x.off_h_count == 0


def test_residual_splits_simple_points():
    x = StarScheme(10, (
        (VirtualComponent.plain(2), 3),
        (VirtualComponent.differential("iii"), 1),
        (VirtualComponent.differential("ii"), 2),
        (VirtualComponent.plain(1), 4),
    ), c4=1)
    res = residual(x)
    assert res.simple_points == 3
    assert res.scheme.t == 9 and res.scheme.c4 == 1
    assert dict(res.scheme.on_h) == {
        VirtualComponent((3, 1), "iii"): 1,
        VirtualComponent((3, 2), "ii"): 2,
    }
    assert res.scheme.degree + res.simple_points == x.degree - x.trace_degree


def test_lemma_inputs_classification():
    x = StarScheme(20, (
        (VirtualComponent.plain(4), 1),
        (VirtualComponent.plain(3), 2),
        (VirtualComponent.differential("vi"), 3),
        (VirtualComponent.differential("v"), 4),
        (VirtualComponent.differential("iv"), 5),
        (VirtualComponent.plain(1), 6),
    ), simple_on_h=7)
    assert lemma_inputs(x) == (1, 2, 0, 13, 3, 4, 5)


def test_star_scheme_canonical_and_validated():
    a = StarScheme(5, ((VirtualComponent.plain(2), 1), (VirtualComponent.plain(2), 2)))
    b = StarScheme(5, ((VirtualComponent.plain(2), 3),))
    assert a == b
    with pytest.raises(ValueError):
        StarScheme(5, c2=-1)
