from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from equihom.coefficients import constant
from equihom.freebasis import (
    Basis,
    BasisError,
    Cell,
    box,
    dual_basis,
    generalized_isotropic,
    geometric_fixed_basis,
    homology_of_pure,
    induce_basis,
    is_isotropic,
    is_pure,
    isotropic_witness,
    norm_basis,
    norm_orbits,
    restrict_basis,
    unit_basis,
)
from equihom.grading import DegreeC2, RegDegree, res_degree
from equihom.groups import cyclic, subgroups
from oracles import coinduce_oracle, pure_homology_c2, pure_homology_levels


def cells_strategy(N, regular=True, max_k=3, size=4):
    subs = [d for d in range(1, N + 1) if N % d == 0]

    def mk(items):
        return Basis(cyclic(N), tuple(Cell(f"c{i}", s, RegDegree(s, k, 0))
                                      for i, (s, k) in enumerate(items)))
    return st.lists(st.tuples(st.sampled_from(subs), st.integers(0 if regular else -max_k, max_k)),
                    min_size=1, max_size=size).map(mk)


def test_cells_and_validation():
    G = cyclic(4)
    c = Cell("x", 2, RegDegree(2, 3))
    assert c.dim == 6 and c.is_regular
    assert Cell("f", 1, 5).degree == RegDegree(1, 5)
    with pytest.raises(BasisError):
        Cell("bad", 2, RegDegree(4, 1))
    with pytest.raises(BasisError):
        Basis(G, (c, c))
    with pytest.raises(BasisError):
        Cell("y", 2, DegreeC2(2, 1)).regular()


@given(cells_strategy(4), cells_strategy(4))
def test_box_underlying_ranks_convolve(B1, B2):
    want = Counter()
    for d1, r1 in B1.underlying_ranks().items():
        for d2, r2 in B2.underlying_ranks().items():
            want[d1 + d2] += r1 * r2
    assert box(B1, B2).underlying_ranks() == dict(sorted(want.items()))


@given(cells_strategy(8))
def test_box_unit_and_restriction(B):
    U = unit_basis(B.group)
    assert sorted(map(str, box(U, B).cells)) == sorted(map(str, B.cells))
    for K in subgroups(B.group):
        R = restrict_basis(B, K)
        # underlying ranks are preserved by restriction
        assert R.underlying_ranks() == B.underlying_ranks()
        for c in R.cells:
            assert c.stab <= K


def test_restriction_degrees():
    B = Basis(cyclic(8), (Cell("x", 8, RegDegree(8, 1)),))
    (c,) = restrict_basis(B, 2).cells
    assert c.degree == res_degree(RegDegree(8, 1), 2) == RegDegree(2, 4)
    assert len(restrict_basis(Basis(cyclic(8), (Cell("y", 2, RegDegree(2, 1)),)), 4).cells) == 2
    assert induce_basis(restrict_basis(B, 2), cyclic(8)).group == cyclic(8)


@given(cells_strategy(2, size=3), st.sampled_from([2, 4, 8]))
def test_norm_orbits_match_coinduction(B, N):
    G = cyclic(N)
    orbs = norm_orbits(2, G, B)
    stabs = Counter(o.cell.stab for o in orbs)
    assert stabs == coinduce_oracle(N, 2, dict(Counter(c.stab for c in B.cells)))
    # every orbit: degree (d / |S|) rho_S with d the total underlying dimension
    NB = norm_basis(2, G, B)
    for c in NB.cells:
        assert c.degree == RegDegree(c.stab, c.dim // c.stab)
    assert sum(o.size for o in orbs) == sum(2 // c.stab for c in B.cells) ** (N // 2)


def test_norm_of_one_free_cell():
    B = Basis(cyclic(2), (Cell("f", 1, 3),))
    NB = norm_basis(2, cyclic(4), B)
    assert [(c.stab, str(c.degree)) for c in NB.cells] == [(1, "6")]
    B = Basis(cyclic(2), (Cell("x", 2, RegDegree(2, 1)), Cell("f", 1, 1)))
    NB = norm_basis(2, cyclic(4), B)
    assert Counter(c.stab for c in NB.cells) == Counter({4: 1, 1: 2})


@given(cells_strategy(4, regular=False))
def test_double_dual(B):
    assert dual_basis(dual_basis(B)) == B


@given(cells_strategy(4, regular=False), st.integers(-4, 4))
def test_dual_homology_flips_degree(B, k):
    M = constant(B.group)
    D = dual_basis(B)
    for K in subgroups(B.group):
        assert homology_of_pure(D, K, k, 0, M).summary() == homology_of_pure(B, K, -k, 0, M).summary()


@given(st.lists(st.tuples(st.sampled_from([1, 2]), st.integers(0, 3)), min_size=1, max_size=5),
       st.integers(0, 3), st.integers(0, 1))
def test_pure_homology_c2_top_level(items, k, eps):
    cells = tuple(Cell(f"c{i}", s, RegDegree(s, m) if s == 2 else m)
                  for i, (s, m) in enumerate(items))
    # a free cell with parameter m sits in integer dimension m
    B = Basis(cyclic(2), cells)
    H = homology_of_pure(B, 2, k, eps, constant(cyclic(2)))
    want = pure_homology_c2([(c.stab, c.degree.k if c.stab == 2 else c.dim) for c in cells], k, eps, 2)
    assert {L: sorted(H.levels[L]) for L in (1, 2)} == want


@given(cells_strategy(4, size=3), st.integers(0, 3), st.integers(0, 1), st.sampled_from([2, 4]))
def test_pure_homology_c4_ranks(B, k, eps, K):
    H = homology_of_pure(B, K, k, eps, constant(B.group))
    cells = [(c.stab, c.degree.k) for c in B.cells]
    want = pure_homology_levels(4, cells, k, eps, K)
    assert {L: H.rank(L) for L in subgroups(B.group)} == want


def test_isotropy_predicates():
    G = cyclic(2)
    B = Basis(G, (Cell("x", 2, RegDegree(2, 1)), Cell("f", 1, 4)))
    assert is_pure(B) and not is_isotropic(B) and generalized_isotropic(B)
    B2 = Basis(G, (Cell("f", 1, 1), Cell("g", 1, 2)))
    assert not generalized_isotropic(B2)
    assert isotropic_witness(B2)[0].label == "g"
    assert not is_pure(Basis(G, (Cell("m", 2, RegDegree(2, 1, 1)),)))


@given(cells_strategy(8, size=4), st.integers(1, 4))
def test_isotropic_minus_one_groups_vanish(B, k):
    B = Basis(B.group, tuple(c for c in B.cells if c.stab > 1))
    M = constant(B.group)
    for K in subgroups(B.group):
        if K > 1:
            assert homology_of_pure(B, K, k, 1, M).is_zero()


def test_geometric_fixed_points():
    G = cyclic(2)
    B = Basis(G, (Cell("x", 2, RegDegree(2, 3)), Cell("f", 1, 2), Cell("m", 2, RegDegree(2, 2, 1))))
    P = geometric_fixed_basis(B)
    assert [(c.label, c.dim) for c in P.basis.cells] == [("x", 3), ("m", 1)]
    assert P.flagged == ("m",)
