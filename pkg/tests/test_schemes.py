from math import comb

import pytest
from hypothesis import given, strategies as st

from postulate.schemes import (
    EPSILON_MAX,
    EPSILON_MIN,
    FatPointComponent,
    FatPointScheme,
    Support,
    boundary_triples,
    epsilon,
    expected_cohomology,
    fat_point_length,
    format_signature,
    hyperplane_residual,
    hyperplane_trace,
    parse_signature,
)


@pytest.mark.parametrize("n,m,length", [(3, 1, 1), (3, 2, 4), (3, 3, 10), (3, 4, 20), (3, 9, 165), (2, 3, 6)])
def test_fat_point_length(n, m, length):
    assert fat_point_length(n, m) == length


@pytest.mark.parametrize("n,m", [(0, 1), (3, 0), (2, -1)])
def test_fat_point_length_rejects(n, m):
    with pytest.raises(ValueError):
        fat_point_length(n, m)


def test_nine_nine_points_degree_19():
    exp = expected_cohomology(FatPointScheme.general(3, {9: 9}), 19)
    assert (exp.N, exp.scheme_degree, exp.expected_h1, exp.expected_h0) == (1540, 1485, 0, 55)


def test_components_sorted_and_signature():
    s = FatPointScheme.general(3, [(2, 1), (4, 2), (3, 1)])
    assert [c.multiplicity for c in s] == [4, 4, 3, 2]
    assert s.signature == ((4, 2), (3, 1), (2, 1))
    assert s.degree == 20 + 20 + 10 + 4


def test_explicit_support_validation():
    with pytest.raises(ValueError):
        FatPointComponent(2, (0, 0, 0))
    with pytest.raises(ValueError):
        FatPointScheme(3, (FatPointComponent(2, (1, 2, 3)),))
    with pytest.raises(ValueError):
        FatPointComponent(0)


def test_signature_grammar():
    assert parse_signature("4:9") == ((4, 9),)
    assert parse_signature("4:7, 5:3") == ((5, 3), (4, 7))
    assert parse_signature("") == ()
    assert parse_signature("2:1,2:2") == ((2, 3),)
    assert format_signature(parse_signature("5:3,4:7")) == "5:3,4:7"
    for bad in ("4", "4:x", "0:3", "4:-1", "4:1:2"):
        with pytest.raises(ValueError):
            parse_signature(bad)


@given(st.dictionaries(st.integers(1, 9), st.integers(1, 20), max_size=5))
def test_signature_roundtrip(counts):
    sig = tuple(sorted(counts.items(), reverse=True))
    assert parse_signature(format_signature(sig)) == sig


@pytest.mark.parametrize("args,value", [((8, 9, 0, 0), -15), ((41, 662, 0, 1), 0), ((10, 0, 0, 0), 286)])
def test_epsilon(args, value):
    assert epsilon(*args) == value


def _boundary_brute(d):
    N = comb(d + 3, 3)
    return [
        (x, y, z)
        for x in range(-(-N // 20) + 1)
        for y in range(-(-N // 10) + 1)
        for z in range(-(-N // 4) + 1)
        if EPSILON_MIN <= epsilon(d, x, y, z) <= EPSILON_MAX
    ]


@pytest.mark.parametrize("d", [0, 1, 3, 5, 8])
def test_boundary_triples_match_brute_force(d):
    assert boundary_triples(d) == _boundary_brute(d)


def test_boundary_counts():
    counts = {d: len(boundary_triples(d)) for d in range(8, 14)}
    assert counts == {8: 535, 9: 813, 10: 1330, 11: 2065, 12: 3448, 13: 4689}
    assert (0, 0, 0) in boundary_triples(0)


def test_hyperplane_trace_and_residual():
    s = FatPointScheme(3, (
        FatPointComponent(3, (1, 2, 3, 0)),
        FatPointComponent(2, Support.ON_HYPERPLANE),
        FatPointComponent(4),
        FatPointComponent(1, Support.ON_HYPERPLANE),
    ))
    trace = hyperplane_trace(s)
    assert trace.ambient_dim == 2
    assert [c.multiplicity for c in trace] == [3, 2, 1]
    assert trace.components[0].support == (1, 2, 3)
    res = hyperplane_residual(s)
    assert sorted(c.multiplicity for c in res) == [1, 2, 4]
