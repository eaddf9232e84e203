import pytest
from hypothesis import given
from hypothesis import strategies as st

from equihom.coefficients import (
    A_SIGMA,
    ONE,
    U_SIGMA,
    MackeyError,
    PointClass,
    PointRingC2,
    UnsupportedConeError,
    builtin,
    burnside,
    check_mackey_axioms,
    constant,
    dual,
    eval_at_gset,
    point_homology,
    value_at_gset,
)
from equihom.grading import DegreeC2
from equihom.groups import GSet, cyclic, subgroups
from oracles import point_z_fixed_orders


@pytest.mark.parametrize("order", [2, 4, 8, 3, 9])
@pytest.mark.parametrize("name", ["z", "fp", "burnside"])
def test_builtins_satisfy_axioms(order, name):
    assert check_mackey_axioms(builtin(name, cyclic(order))).ok


def test_builtin_values():
    G = cyclic(4)
    assert constant(G).levels == {1: (0,), 2: (0,), 4: (0,)}
    assert burnside(G).levels[4] == (0, 0, 0)
    assert dual(constant(cyclic(2), 2)).levels == {1: (2,), 2: (2,)}
    assert check_mackey_axioms(dual(constant(G, 2))).ok
    # res then tr on constant Z is multiplication by the index
    M = constant(G)
    assert M.tr_map(1, 2) == [[2]] and M.res_map(2, 1) == [[1]]
    with pytest.raises(MackeyError):
        builtin("nope", G)


def test_evaluation_on_gsets():
    G = cyclic(4)
    M = constant(G)
    T = GSet(G, ((1, 1), (2, 2)))
    assert value_at_gset(M, T) == (0, 0, 0)
    MT = eval_at_gset(M, GSet.orbit(G, 2))
    # M_{G/C2}(G/e) = M(G/C2 x G/e) = M(2 G/e)
    assert MT.size(1) == 2 and MT.size(4) == 1
    assert check_mackey_axioms(MT).ok


@given(st.integers(-7, 7), st.integers(-7, 7))
def test_integral_point_fixed_level(a, b):
    M = point_homology("z", DegreeC2(a, b))
    assert list(M.levels[2]) == point_z_fixed_orders(a, b)
    assert M.levels[1] == ((0,) if a + b == 0 else ())
    assert check_mackey_axioms(M).ok


def test_named_classes():
    assert point_homology("z", DegreeC2(0, -1)).labels[2] == ["a_s"]
    assert point_homology("z", DegreeC2(2, -2)).labels[2] == ["u_2s"]
    assert point_homology("f2", DegreeC2(1, -1)).labels[2] == ["u_s"]


def test_point_ring():
    F = PointRingC2("f2")
    Z = PointRingC2("z")
    assert A_SIGMA.degree == DegreeC2(0, -1) and U_SIGMA.degree == DegreeC2(1, -1)
    assert F.exists(U_SIGMA) and not Z.exists(U_SIGMA)
    assert Z.exists(PointClass(3, 2)) and Z.order(PointClass(3, 2)) == 2
    assert Z.order(PointClass(0, 2)) == 0
    assert F.multiply(A_SIGMA, U_SIGMA) == PointClass(1, 1)
    assert F.restrict(A_SIGMA) == 0 and F.restrict(U_SIGMA) == 1 and ONE.is_unit
    assert Z.reduce_coeff(A_SIGMA, 3) == 1 and Z.reduce_coeff(ONE, 3) == 3
    with pytest.raises(UnsupportedConeError):
        PointClass(-1, 0)
    with pytest.raises(UnsupportedConeError):
        Z.multiply(U_SIGMA, ONE)
    with pytest.raises(MackeyError):
        PointRingC2("q")


@pytest.mark.parametrize("order", [2, 4, 8])
def test_direct_sum_keeps_axioms(order):
    G = cyclic(order)
    M = constant(G).direct_sum(burnside(G))
    assert check_mackey_axioms(M).ok
    for H in subgroups(G):
        assert M.size(H) == 1 + len(burnside(G).levels[H])
