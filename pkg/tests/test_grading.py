import pytest
from hypothesis import given
from hypothesis import strategies as st

from equihom.grading import (
    DegreeC2,
    DegreeError,
    InducedDegree,
    RegDegree,
    add_degrees,
    as_regular,
    canonical,
    induce_degree,
    integer_degree,
    negate,
    parse_degree,
    pretty,
    res_degree,
    same_degree,
    to_full_c2,
)


def test_regular_dims():
    assert RegDegree(4, 3, 1).dim == 11
    assert RegDegree(1, 5, 1) == integer_degree(4)  # rho_e - 1 = 0
    assert DegreeC2(2, 1).dim == 3 and DegreeC2(2, 1).fixed_dim == 2
    with pytest.raises(DegreeError):
        RegDegree(2, 1, 2)


def test_c2_notation_agrees():
    assert to_full_c2(RegDegree(2, 3, 1)) == DegreeC2(2, 3)
    assert as_regular(DegreeC2(2, 3)) == RegDegree(2, 3, 1)
    assert as_regular(DegreeC2(2, 1)) is None
    assert canonical(DegreeC2(4, 4)) == RegDegree(2, 4)
    assert same_degree(RegDegree(2, 2), DegreeC2(2, 2))


def test_sum_of_two_minus_ones_leaves_regular_degrees():
    d = add_degrees(RegDegree(2, 1, 1), RegDegree(2, 1, 1))
    assert d == DegreeC2(0, 2)
    with pytest.raises(DegreeError):
        add_degrees(RegDegree(4, 1, 1), RegDegree(4, 1, 1))
    with pytest.raises(DegreeError):
        add_degrees(RegDegree(2, 1), RegDegree(4, 1))


def test_restriction_and_induction():
    assert res_degree(RegDegree(8, 1), 2) == RegDegree(2, 4)
    assert res_degree(RegDegree(4, 2, 1), 1) == integer_degree(7)
    assert induce_degree(RegDegree(2, 3), 8) == RegDegree(8, 3)
    ind = induce_degree(DegreeC2(2, 1), 4)
    assert isinstance(ind, InducedDegree) and ind.dim == 6
    # restricting Ind_2^4 W back to C2 gives two copies of W
    assert res_degree(ind, 2) == DegreeC2(4, 2)


@given(st.sampled_from([1, 2, 4, 8]), st.integers(-6, 6), st.integers(0, 1))
def test_text_round_trip(stab, k, eps):
    d = RegDegree(stab, k, eps)
    assert parse_degree(str(d)) == d


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_c2_text_round_trip_and_negation(a, b):
    d = DegreeC2(a, b)
    assert parse_degree(str(d)) == d
    assert add_degrees(d, negate(d)) == DegreeC2(0, 0)


@given(st.integers(-5, 5), st.integers(0, 1), st.integers(-5, 5), st.integers(0, 1))
def test_addition_is_dimension_additive(k1, e1, k2, e2):
    x, y = RegDegree(2, k1, e1), RegDegree(2, k2, e2)
    assert add_degrees(x, y).dim == x.dim + y.dim
    assert same_degree(add_degrees(x, y), add_degrees(y, x))


def test_pretty():
    assert pretty(RegDegree(2, 1)) == "ρ₂"
    assert pretty(RegDegree(4, 3, 1)) == "3ρ₄-1"
    assert pretty(DegreeC2(2, 1)) == "ρ₂+1"
    assert pretty(DegreeC2(0, -1)) == "-σ"
    assert pretty(DegreeC2(1, -1)) == "1-σ"
    with pytest.raises(DegreeError):
        parse_degree("rho")
