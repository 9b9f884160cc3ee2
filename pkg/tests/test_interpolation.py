from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from postulate.gfp import rational_rank
from postulate.interpolation import (
    MonomialBasis,
    Verdict,
    assign_integer_supports,
    build_matrix,
    build_rational_matrix,
    check_postulation,
    condition_indices,
    derivative_value,
    exponent_tuples,
    oracle_check,
    trial_seed,
)
from postulate.schemes import FatPointComponent, FatPointScheme, Support


def test_exponent_tuples():
    assert exponent_tuples(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(exponent_tuples(4, 8)) == 165
    assert len(MonomialBasis(3, 19)) == 1540


@pytest.mark.parametrize("beta,alpha,point,value", [
    ((2, 1, 0, 0), (2, 0, 0, 0), (1, 1, 1, 1), 2),
    ((2, 1, 0, 0), (0, 0, 2, 0), (5, 7, 1, 1), 0),
    ((3, 0, 0, 0), (1, 1, 0, 0), (2, 3, 1, 1), 0),
    ((3, 2, 0), (1, 1, 0), (2, 3, 1), 3 * 4 * 2 * 3),
])
def test_derivative_value(beta, alpha, point, value):
    assert derivative_value(beta, alpha, point) == value
    assert derivative_value(beta, alpha, point, 5) == value % 5


def test_nine_quartuple_points_matrix_shape():
    m = build_matrix(FatPointScheme.general(3, {4: 9}), 8, rng=0)
    assert m.shape == (180, 165)


def test_simple_point_row_is_monomial_evaluation():
    point = (2, 3, 5)
    m = build_matrix(FatPointScheme(2, (FatPointComponent(1, point),)), 3, 101)
    expected = [2**a * 3**b * 5**c % 101 for a, b, c in exponent_tuples(3, 3)]
    assert m.tolist() == [expected]


def test_double_point_in_plane_linear_forms():
    s = FatPointScheme(2, (FatPointComponent(2, (1, 2, 3)),))
    assert rational_rank(build_rational_matrix(s, 1)) == 3


@given(st.integers(1, 3), st.lists(st.integers(1, 5), min_size=1, max_size=6), st.integers(0, 7))
def test_row_count_equals_degree(n, mults, d):
    s = FatPointScheme.general(n, [(m, 1) for m in mults])
    m = build_matrix(s, d, rng=1)
    assert m.shape == (s.degree, comb(d + n, n))
    assert len(condition_indices(s)) == sum(
        comb(n + c.multiplicity - 1, n) for c in s.components
    )


def test_high_multiplicity_kills_everything():
    # a 5-point in degree 2 vanishes on no nonzero quadric: full column rank
    s = FatPointScheme.general(2, {5: 1})
    report = check_postulation(s, 2)
    assert report.rank == 6 and report.verdict is Verdict.GOOD
    assert build_matrix(s, 2, rng=0).shape == (15, 6)


def test_on_hyperplane_points_have_zero_last_coordinate():
    s = FatPointScheme.general(3, {1: 4}, Support.ON_HYPERPLANE)
    m = build_matrix(s, 1, rng=3)
    # the monomial x_3 is the last column in lex-descending order
    assert (m[:, -1] == 0).all()


def test_field_preconditions():
    s = FatPointScheme.general(3, {2: 1})
    with pytest.raises(ValueError):
        build_matrix(s, 8, p=7)
    with pytest.raises(ValueError):
        check_postulation(FatPointScheme.general(2, {5: 1}), 1, prime=5)
    with pytest.raises(ValueError):
        check_postulation(s, 2, trials=0)


@pytest.mark.parametrize("points,d,verdict,rank", [
    ({4: 9}, 8, Verdict.DEFECTIVE, 164),
    ({4: 7, 3: 2, 2: 1}, 8, Verdict.DEFECTIVE, None),
    ({5: 5, 4: 1}, 8, Verdict.GOOD, 165),
])
def test_check_postulation_known_cases(points, d, verdict, rank):
    report = check_postulation(FatPointScheme.general(3, points), d)
    assert report.verdict is verdict
    if rank is not None:
        assert report.rank == rank


def test_report_fields():
    report = check_postulation(FatPointScheme.general(3, {4: 9}), 8)
    assert (report.N, report.scheme_degree, report.defect) == (165, 180, 1)
    assert (report.h0, report.h1) == (1, 16)
    assert report.trials_used == 3


def test_good_case_stops_after_first_trial():
    report = check_postulation(FatPointScheme.general(3, {2: 3}), 4)
    assert report.trials_used == 1 and report.verdict is Verdict.GOOD


def test_trial_seed_is_stable_and_distinct():
    s = FatPointScheme.general(3, {4: 2})
    assert trial_seed(0, 0, s, 8) == trial_seed(0, 0, s, 8)
    assert len({trial_seed(0, t, s, 8) for t in range(5)}) == 5
    assert trial_seed(1, 0, s, 8) != trial_seed(0, 0, s, 8)


@pytest.mark.parametrize("n,d,points,defect", [
    (2, 4, {2: 5}, 1),
    (3, 4, {2: 9}, 1),
    (2, 2, {2: 2}, 1),
    (2, 5, {2: 5}, 0),
    (3, 2, {3: 1}, 0),
])
def test_oracle_classical_cases(n, d, points, defect):
    s = assign_integer_supports(FatPointScheme.general(n, points), seed=11)
    report = oracle_check(s, d)
    assert report.defect == defect
    assert check_postulation(FatPointScheme.general(n, points), d).defect == defect


def test_oracle_bound_and_explicit_supports():
    with pytest.raises(ValueError):
        oracle_check(assign_integer_supports(FatPointScheme.general(3, {2: 1})), 8)
    with pytest.raises(ValueError):
        build_rational_matrix(FatPointScheme.general(2, {2: 1}), 2)


def test_oracle_five_double_points_rank_14():
    s = assign_integer_supports(FatPointScheme.general(2, {2: 5}), seed=2, bound=9)
    assert oracle_check(s, 4).rank == 14


def test_rational_supports_are_cleared():
    from fractions import Fraction

    a = FatPointScheme(2, (FatPointComponent(2, (Fraction(1, 2), 1, 3)),))
    b = FatPointScheme(2, (FatPointComponent(2, (1, 2, 6)),))
    assert oracle_check(a, 2).rank == oracle_check(b, 2).rank == 3
    ma = build_matrix(a, 2, 101)
    assert ma.shape == (3, 6)


@given(st.integers(0, 10**6))
def test_rank_monotone_under_adding_components(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    d = int(rng.integers(2, 6))
    mults = [int(m) for m in rng.integers(1, 4, size=int(rng.integers(1, 5)))]
    small = assign_integer_supports(FatPointScheme.general(n, [(m, 1) for m in mults]), seed)
    extra = assign_integer_supports(FatPointScheme.general(n, {int(rng.integers(1, 4)): 1}), seed + 1)
    big = small.union(extra)
    assert check_postulation(big, d).rank >= check_postulation(small, d).rank
