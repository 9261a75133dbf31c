import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ychl.deterministic import DycParams
from ychl.regions import (
    Inequality,
    LinearRegion,
    RateTuple,
    as_rates,
    build_cutset_region,
    build_outer_region_d,
    contains,
    grid_equal,
    integer_point_array,
    integer_points,
    parse_rates,
    redundant_cutset_region,
)


def oracle_outer(n, r):
    """The eight outer-bound inequalities written out by hand."""
    n1, n2, n3 = n
    R12, R13, R21, R23, R31, R32 = r
    return min(r) >= 0 and all(
        (
            R31 + R32 <= n3,
            R13 + R23 <= n3,
            R12 + R32 + R13 <= n2,
            R12 + R32 + R31 <= n1,
            R21 + R31 + R32 <= n2,
            R21 + R31 + R23 <= n2,
            R13 + R23 + R12 <= n2,
            R13 + R23 + R21 <= n1,
        )
    )


def oracle_cutset(n, r):
    rate = dict(zip(((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)), r))
    for j in (1, 2, 3):
        k, l = (u for u in (1, 2, 3) if u != j)
        b = min(n[j - 1], max(n[k - 1], n[l - 1]))
        if rate[(j, k)] + rate[(j, l)] > b or rate[(k, j)] + rate[(l, j)] > b:
            return False
    return all(rate[(j, k)] <= min(n[j - 1], n[k - 1]) for j, k in rate)


def ordered_triples(max_n):
    return [(a, b, c) for a in range(max_n + 1) for b in range(a + 1) for c in range(b + 1)]


@st.composite
def params_st(draw, max_q=4):
    return DycParams(*sorted(draw(st.lists(st.integers(0, max_q), min_size=3, max_size=3)), reverse=True))


def test_outer_rhs():
    assert build_outer_region_d(DycParams(5, 4, 3)).rhs == (3, 3, 4, 5, 4, 4, 4, 5)
    assert build_outer_region_d(DycParams(4, 3, 2)).rhs == (2, 2, 3, 4, 3, 3, 3, 4)
    assert len(build_cutset_region(DycParams(2, 2, 2))) == 12
    assert len(redundant_cutset_region(DycParams(2, 2, 2))) == 4


def test_membership_examples():
    assert contains(build_outer_region_d(DycParams(5, 4, 3)), (0, 2, 2, 1, 0, 2))
    assert not contains(build_outer_region_d(DycParams(4, 3, 2)), (2, 2, 0, 0, 0, 0))
    assert contains(build_outer_region_d(DycParams(0, 0, 0)), (0,) * 6)
    assert not contains(build_outer_region_d(DycParams(3, 3, 3)), (1, -1, 0, 0, 0, 0))


def test_integer_point_counts():
    assert len(integer_points(build_outer_region_d(DycParams(1, 1, 1)))) == 10
    assert integer_points(build_outer_region_d(DycParams(1, 0, 0))) == {RateTuple(0, 0, 0, 0, 0, 0)}


@pytest.mark.parametrize("n", ordered_triples(3))
def test_enumeration_matches_brute_force(n):
    pts = integer_points(build_outer_region_d(DycParams(*n)))
    brute = {RateTuple(*r) for r in itertools.product(range(n[0] + 1), repeat=6) if oracle_outer(n, r)}
    assert pts == brute
    cut = integer_points(build_cutset_region(DycParams(*n)))
    brute_cut = {RateTuple(*r) for r in itertools.product(range(n[0] + 1), repeat=6) if oracle_cutset(n, r)}
    assert cut == brute_cut


def test_enumeration_is_lexicographic():
    arr = integer_point_array(build_outer_region_d(DycParams(2, 2, 1)))
    rows = [tuple(r) for r in arr]
    assert rows == sorted(rows)


def test_cyclic_witness_separates_cutset():
    params = DycParams(2, 2, 2)
    r = (2, 0, 0, 2, 2, 0)
    assert contains(build_cutset_region(params), r)
    assert not contains(build_outer_region_d(params), r)
    assert not grid_equal(build_outer_region_d(params), build_cutset_region(params))


@settings(max_examples=30, deadline=None)
@given(params_st(), params_st())
def test_monotone_in_levels(a, b):
    lo = DycParams(*(min(x, y) for x, y in zip(a.levels, b.levels)))
    hi = DycParams(*(max(x, y) for x, y in zip(a.levels, b.levels)))
    assert integer_points(build_outer_region_d(lo)) <= integer_points(build_outer_region_d(hi))


@settings(max_examples=30, deadline=None)
@given(params_st())
def test_outer_inside_cutset(params):
    assert integer_points(build_outer_region_d(params)) <= integer_points(build_cutset_region(params))


def test_json_round_trip_exact_and_float():
    region = build_outer_region_d(DycParams(5, 4, 3))
    back = LinearRegion.from_json(region.to_json())
    assert back.rhs == region.rhs and back.is_exact()
    assert json.loads(region.to_json())["vars"] == ["R12", "R13", "R21", "R23", "R31", "R32"]
    frac = LinearRegion((Inequality((1, 0, 0, 0, 0, 0), Fraction(3, 2), "t"),))
    assert LinearRegion.from_json(frac.to_json()).rhs == (Fraction(3, 2),)
    flt = LinearRegion((Inequality((1, 1, 0, 0, 0, 0), 0.25, "f"),))
    assert LinearRegion.from_json(flt.to_json()).rhs == (0.25,)
    assert not flt.is_exact()


def test_rate_parsing():
    assert parse_rates("1,2,0,0,0,0", exact=True) == (1, 2, 0, 0, 0, 0)
    r = parse_rates("1/2,0.5,3,0,0,0", exact=True)
    assert r[0] == Fraction(1, 2) and r[1] == Fraction(1, 2) and isinstance(r[2], int)
    assert parse_rates("1/4,0,0,0,0,0")[0] == 0.25
    with pytest.raises(ValueError):
        parse_rates("1,2,3")
    with pytest.raises(ValueError):
        as_rates((1, 0, 0, 0, 0, -1))
    with pytest.raises(TypeError):
        as_rates((0.5, 0, 0, 0, 0, 0), exact=True)
    assert RateTuple(1, 2, 3, 4, 5, 6).rate(3, 1) == 5
