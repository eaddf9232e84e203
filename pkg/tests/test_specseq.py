from collections import Counter
from pathlib import Path

import pytest
from oracles import exterior_counts

from equihom.freebasis import geometric_fixed_basis
from equihom.grading import RegDegree, integer_degree
from equihom.groups import cyclic
from equihom.io import emit_result, to_result
from equihom.purering import load_builtin
from equihom.specseq import (
    GradedModule,
    GradedPolyAlgebra,
    SpecSeqError,
    algebra_from_model,
    bar_complex_tor,
    bar_e2,
    base_module,
    bbur_presentation,
    check_truncation,
    cohomology_algebra,
    em_e2,
    free_module,
    koszul_euler,
    page_euler,
    tor_koszul,
    twisted_bar_e2,
)

BUR = load_builtin("bur")
GOLDEN = Path(__file__).parent / "golden"


def page_counts(page):
    """{(filtration, underlying dim): rank}"""
    out = Counter()
    for (s, D), e in page.entries.items():
        out[(-s, abs(D.dim))] += e.rank
    return out


@pytest.mark.parametrize("trunc", [4, 8, 12])
def test_bar_page_is_exterior(trunc):
    A = algebra_from_model(BUR, trunc)
    page = bar_e2(A, trunc=trunc)
    assert page.exterior and tor_koszul(A, trunc).checks["closed_form"]
    assert page_counts(page) == exterior_counts([2 * i for i in range(1, trunc // 2 + 1)], trunc)
    for (s, D), e in page.entries.items():
        assert isinstance(D, RegDegree) and D.stab == 2 and not e.torsion
        if s == -1:
            assert e.labels == (f"ybar{D.k}",)


@pytest.mark.parametrize("trunc", [6, 10])
def test_koszul_agrees_with_bar_complex(trunc):
    A = algebra_from_model(BUR, trunc)
    got = {k: (e.rank, e.torsion) for k, e in tor_koszul(A, trunc).entries.items()}
    assert got == bar_complex_tor(A, trunc)


def test_euler_characteristic():
    A = algebra_from_model(BUR, 10)
    for X in (base_module(A), free_module(A, 10)):
        page = bar_e2(A, X, base_module(A), 10)
        want = {k: v for k, v in koszul_euler(A, X, base_module(A), 10).items() if v}
        assert {k: v for k, v in page_euler(page).items() if v} == want


def test_free_module_collapses_to_filtration_zero():
    A = algebra_from_model(BUR, 8)
    page = bar_e2(A, free_module(A, 8), base_module(A), 8)
    assert set(page.entries) == {(0, RegDegree(2, 0))}
    assert page.entries[(0, RegDegree(2, 0))].rank == 1


def test_base_algebra_gives_box_convolution():
    G = cyclic(2)
    A0 = GradedPolyAlgebra(G, "Z", ())
    X = GradedModule(A0, (("x0", RegDegree(2, 0)), ("x1", RegDegree(2, 1))))
    Y = GradedModule(A0, (("y1", RegDegree(2, 1)), ("y2", RegDegree(2, 2))))
    page = bar_e2(A0, X, Y, 8)
    ranks = Counter({D: e.rank for (s, D), e in page.entries.items() if s == 0})
    assert all(s == 0 for s, _ in page.entries)
    assert ranks == Counter({RegDegree(2, 1): 1, RegDegree(2, 2): 2, RegDegree(2, 3): 1})


def test_underlying_run_has_the_same_ranks():
    A = algebra_from_model(BUR, 10)
    U = GradedPolyAlgebra(cyclic(1), "Z", tuple((f"a{i}", integer_degree(2 * i)) for i in range(1, 6)))
    assert page_counts(bar_e2(A, trunc=10)) == page_counts(bar_e2(U, trunc=10))


def test_twisted_page():
    page = twisted_bar_e2(BUR, trunc=8)
    assert page.group == "e"
    assert page_counts(page) == exterior_counts([2, 4, 6, 8], 8)
    labels = dict(((s, D.dim), e.labels) for (s, D), e in page.entries.items())
    assert labels[(-1, 2)] == ("[ybar1@1 + ybar1@0]",)
    assert labels[(-1, 4)] == ("[-ybar2@1 + ybar2@0]",)


def test_em_page():
    B = cohomology_algebra(BUR, 8)
    assert [n for n, _ in B.gens] == ["cbar1", "cbar2", "cbar3", "cbar4"]
    page = em_e2(B, trunc=8)
    assert page.exterior
    assert page_counts(page) == exterior_counts([2, 4, 6, 8], 8)
    with pytest.raises(SpecSeqError):
        em_e2(algebra_from_model(BUR, 4), trunc=4)


def test_presentation():
    page, pres = bbur_presentation(BUR, 12)
    assert pres.collapse
    assert [n for n, _ in pres.generators] == [f"ybar{i}" for i in range(1, 7)]
    for i, (_, d) in enumerate(pres.generators, 1):
        assert str(d) == f"{i + 1}+{i}*s"
    assert pres.relations == [("ybar1**2", "a_s*ybar3"), ("ybar2**2", "a_s*ybar5")]


def test_golden_files():
    _, pres = bbur_presentation(BUR, 12)
    for fmt, name in (("json", "bbur_t12.json"), ("text", "bbur_t12.txt")):
        assert emit_result(to_result(pres), fmt) == (GOLDEN / name).read_text()


def polynomial_counts(degrees, bound):
    c = [1] + [0] * bound
    for d in degrees:
        for m in range(d, bound + 1):
            c[m] += c[m - d]
    return c


def test_fixed_points_of_the_presentation():
    trunc = 12
    _, pres = bbur_presentation(BUR, trunc)
    phi = geometric_fixed_basis(pres.basis(trunc))
    top = (trunc + 1) // 2
    counts = Counter(c.dim for c in phi.basis.cells)
    want = polynomial_counts([2, 3, 5, 7, 9, 11], top)
    assert [counts[d] for d in range(top + 1)] == want


def test_truncation_guard():
    with pytest.raises(SpecSeqError):
        check_truncation(17)
    with pytest.raises(SpecSeqError):
        check_truncation(-1)
    assert check_truncation(16) == 16
