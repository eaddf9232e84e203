"""Fast invariant and oracle checks across the package (``equihom check``)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .coefficients import (
    builtin,
    check_mackey_axioms,
    point_f2_closed_form,
    point_homology,
    point_homology_dual,
)
from .freebasis import Basis, Cell, dual_basis, homology_of_pure, norm_basis
from .grading import DegreeC2, RegDegree
from .groups import (
    GSet,
    coinduce,
    coinduce_concrete,
    coset_space,
    concrete_product,
    concrete_restrict,
    cyclic,
    orbit_product,
    realize,
    restrict_gset,
    subgroups,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _mackey() -> str | None:
    for order in (2, 4, 8, 9):
        G = cyclic(order)
        names = ("z", "fp", "burnside", "dual-f2") if G.prime == 2 else ("z", "fp", "burnside")
        for n in names:
            rep = check_mackey_axioms(builtin(n, G))
            if not rep.ok:
                return f"{n} over {G}: {rep.kind} at {rep.witness}"
    return None


def _gsets() -> str | None:
    for order in (2, 4, 8):
        G = cyclic(order)
        for H in subgroups(G):
            for K in subgroups(G):
                brute = concrete_product(coset_space(G, H), coset_space(G, K)).decompose()
                if brute != orbit_product(G, H, K):
                    return f"G/{H} x G/{K} over {G}"
                T = GSet(G, ((H, 1), (K, 1)))
                if concrete_restrict(realize(T), K).decompose() != restrict_gset(G, K, T):
                    return f"restriction to {K} over {G}"
            if G.order // H <= 4:
                T = GSet(G.subgroup(H), ((1, 1), (H, 1)))
                brute = coinduce_concrete(G, H, realize(T)).decompose()
                if brute != coinduce(G, H, T):
                    return f"coinduction from {H} over {G}"
    return None


def _point() -> str | None:
    for a in range(-4, 5):
        for b in range(-4, 5):
            D = DegreeC2(a, b)
            M = point_homology("f2", D)
            got = {1: M.size(1), 2: M.size(2)}
            if got != point_homology_dual("f2", D) or got != point_f2_closed_form(D):
                return f"degree {D}"
            if check_mackey_axioms(point_homology("z", D)).ok is False:
                return f"Z coefficients, degree {D}"
    return None


def _koszul() -> str | None:
    from .purering import load_builtin
    from .specseq import algebra_from_model, bar_complex_tor, tor_koszul
    md = load_builtin("bur")
    A = algebra_from_model(md, 12)
    page = tor_koszul(A, 12)
    oracle = bar_complex_tor(A, 12)
    got = {k: (e.rank, e.torsion) for k, e in page.entries.items()}
    if got != oracle:
        return "bar complex oracle disagrees with the Koszul page"
    return None


def _partitions(n: int) -> int:
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            p[m] += p[m - k]
    return p[n]


def _pure() -> str | None:
    from .purering import dyer_lashof, expand_basis, load_builtin, norm_element
    md = load_builtin("bur")
    B = expand_basis(md, 24)
    for n in range(1, 13):
        cnt = sum(1 for c in B.cells if c.degree == RegDegree(2, n, 0))
        if cnt != _partitions(n):
            return f"rank in degree {n}rho is {cnt}"
    for i in range(1, 9):
        got = norm_element(md.gen_element(f"abar{i}", "e"))
        want = md.element(f"{(-1) ** i}*abar{i}^2")
        if got != want:
            return f"N(a{i}) = {got}"
    F = md.mod2()
    for n in range(1, 6):
        q = dyer_lashof(n + 1, 0, F.gen_element(f"abar{n}"))
        if q.value != F.gen_element(f"abar{2 * n + 1}"):
            return f"Q^{n + 1}(abar{n}) = {q}"
    return None


def _bbur() -> str | None:
    from .purering import load_builtin
    from .specseq import bbur_presentation
    _, pres = bbur_presentation(load_builtin("bur"), 12)
    want = [(f"ybar{i}**2", f"a_s*ybar{2 * i + 1}") for i in range(1, 7) if 2 * i + 1 <= 6]
    if not pres.collapse or pres.relations != want:
        return f"relations {pres.relations}"
    return None


def _norms_and_duals() -> str | None:
    from .purering import expand_basis, expand_normed_basis, load_builtin
    ds = load_builtin("dual_steenrod")
    NB = norm_basis(1, cyclic(2), expand_basis(ds, 4), 4)
    brute = expand_normed_basis(ds, 4)
    if sorted((c.label, c.stab, c.degree) for c in NB.cells) != \
            sorted((c.label, c.stab, c.degree) for c in brute.cells):
        return "dual Steenrod norm basis"
    G = cyclic(4)
    B = Basis(G, (Cell("x", 4, RegDegree(4, 1)), Cell("y", 2, RegDegree(2, 3)), Cell("z", 1, 5)))
    if dual_basis(dual_basis(B)) != B:
        return "dual of dual"
    M = builtin("z", G)
    for K in subgroups(G):
        for k in range(-3, 4):
            a = homology_of_pure(dual_basis(B), K, k, 0, M).summary()
            b = homology_of_pure(B, K, -k, 0, M).summary()
            if a != b:
                return f"duality at ({K}, {k})"
    return None


CHECKS: list[tuple[str, Callable[[], str | None]]] = [
    ("mackey axioms (constant, Burnside, dual)", _mackey),
    ("G-set closed forms vs enumeration", _gsets),
    ("point homology: chains vs cochains vs closed form", _point),
    ("Koszul engine vs bar complex", _koszul),
    ("BU_R model: ranks, norms, Dyer-Lashof", _pure),
    ("BBU_R presentation", _bbur),
    ("norm bases and duality", _norms_and_duals),
]


def run_checks() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        try:
            bad = fn()
        except Exception as exc:  # a crash is a failed check, reported by name
            bad = f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bad is None, bad or ""))
    return out


__all__ = ["CheckResult", "run_checks", "CHECKS"]
