"""Free bases: finite families of induced cells G x_H S^V.

A :class:`Basis` over G lists cells ``(label, stabilizer, degree)``.  The
operations here act on the indexing data only: box products decompose
products of orbits, norms coinduce the indexing set, duals negate degrees.
For homologically pure bases (all degrees k rho_H) the homology with
coefficients in a Mackey functor is read off from the cells.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .coefficients import MackeyTable, direct_sum_all, eval_at_gset, zero_table
from .grading import (
    Degree,
    DegreeC2,
    DegreeError,
    RegDegree,
    add_degrees,
    as_regular,
    canonical,
    induce_degree,
    integer_degree,
    negate,
    res_degree,
    sort_key,
)
from .groups import (
    CyclicGroup,
    GroupError,
    GSet,
    check_subgroup,
    coinduce_concrete,
    cyclic,
    labelled_gset,
    orbit_product,
    subgroup_name,
)


class BasisError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    label: str
    stab: int
    degree: Degree

    def __post_init__(self):
        d = self.degree
        if isinstance(d, int):
            d = integer_degree(d)
        if self.stab == 1 and not isinstance(d, RegDegree):
            d = integer_degree(d.dim)
        object.__setattr__(self, "degree", d)
        if d.stab != self.stab:
            raise BasisError(
                f"cell {self.label}: degree {d} lives over order {d.stab}, stabilizer is {self.stab}")

    @property
    def dim(self) -> int:
        return self.degree.dim

    @property
    def is_regular(self) -> bool:
        r = as_regular(self.degree)
        return r is not None and r.eps == 0

    def regular(self) -> RegDegree:
        r = as_regular(self.degree)
        if r is None or r.eps:
            raise BasisError(f"cell {self.label} has non-regular degree {self.degree}")
        return r

    def __str__(self):
        return f"{self.label}: G/{subgroup_name(self.stab)} in {self.degree}"


@dataclass(frozen=True)
class Basis:
    group: CyclicGroup
    cells: tuple[Cell, ...] = ()
    coeff: str = "Z"

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        seen = set()
        for c in self.cells:
            check_subgroup(self.group, c.stab)
            if c.label in seen:
                raise BasisError(f"duplicate label {c.label!r}")
            seen.add(c.label)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def cell(self, label: str) -> Cell:
        for c in self.cells:
            if c.label == label:
                return c
        raise KeyError(label)

    def in_dim(self, n: int) -> list[Cell]:
        return [c for c in self.cells if c.dim == n]

    def is_finite_type(self) -> bool:
        # a finite list has finitely many cells in each dimension
        return True

    def underlying_ranks(self) -> dict[int, int]:
        """Rank of the underlying homology in each dimension."""
        out: dict[int, int] = {}
        N = self.group.order
        for c in self.cells:
            out[c.dim] = out.get(c.dim, 0) + N // c.stab
        return dict(sorted(out.items()))

    def indexing_set(self) -> GSet:
        return GSet(self.group, tuple((c.stab, 1) for c in self.cells))

    def sorted(self) -> "Basis":
        cells = sorted(self.cells, key=lambda c: (c.dim, -c.stab, sort_key(c.degree), c.label))
        return Basis(self.group, tuple(cells), self.coeff)

    def truncate(self, max_dim: int) -> "Basis":
        return Basis(self.group, tuple(c for c in self.cells if c.dim <= max_dim), self.coeff)

    def relabel(self, fn) -> "Basis":
        return Basis(self.group, tuple(Cell(fn(c.label), c.stab, c.degree) for c in self.cells),
                     self.coeff)


def unit_basis(G: CyclicGroup, coeff: str = "Z") -> Basis:
    """The sphere: a single top cell in degree 0."""
    return Basis(G, (Cell("1", G.order, RegDegree(G.order, 0, 0)),), coeff)


def _check_compatible(B1: Basis, B2: Basis) -> None:
    if B1.group != B2.group:
        raise GroupError(f"bases over {B1.group} and {B2.group}")
    if B1.coeff != B2.coeff:
        raise BasisError(f"bases with coefficients {B1.coeff} and {B2.coeff}")


def _pair_label(a: str, b: str) -> str:
    if a == "1":
        return b
    if b == "1":
        return a
    return f"{a}|{b}"


def box(B1: Basis, B2: Basis) -> Basis:
    """Basis of a smash product: G/H x G/K splits into copies of G/(H n K)."""
    _check_compatible(B1, B2)
    G = B1.group
    cells = []
    for c1 in B1.cells:
        for c2 in B2.cells:
            prod = orbit_product(G, c1.stab, c2.stab)
            (S, m), = prod.orbits
            deg = add_degrees(res_degree(c1.degree, S), res_degree(c2.degree, S))
            base = _pair_label(c1.label, c2.label)
            for k in range(m):
                label = base if m == 1 else f"{base}#{k}"
                cells.append(Cell(label, S, canonical(deg)))
    return Basis(G, tuple(cells), B1.coeff)


def restrict_basis(B: Basis, K: int) -> Basis:
    """i_K^* of a basis; G/J restricts to |G|/lcm copies of K/(J n K)."""
    G = B.group
    check_subgroup(G, K)
    GK = G.subgroup(K)
    cells = []
    for c in B.cells:
        S = gcd(c.stab, K)
        m = G.order * S // (c.stab * K)
        deg = canonical(res_degree(c.degree, S))
        for k in range(m):
            cells.append(Cell(c.label if m == 1 else f"{c.label}#{k}", S, deg))
    return Basis(GK, tuple(cells), B.coeff)


def induce_basis(B: Basis, G: CyclicGroup) -> Basis:
    """G_+ smash_H: a cell H/L becomes G/L with the same degree."""
    if G.prime != B.group.prime or G.order % B.group.order:
        raise GroupError(f"{B.group} is not a subgroup of {G}")
    return Basis(G, B.cells, B.coeff)


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class NormOrbit:
    """One orbit of Map^H(G, T): its representative function and cell."""

    rep: tuple
    size: int
    cell: Cell
    underlying_dim: int


def _norm_degree(G: CyclicGroup, H: int, S: int, fibres: list[Degree]) -> Degree:
    """Degree of the cell G/S indexed by an H-map G -> T.

    ``fibres[r]`` is the degree at the value on coset representative r.  For
    S <= H the fibre representations restrict to S and add; for S > H the
    S-orbits on G/H are free of size [S:H] and the sum over [G:S]
    representatives is induced up from H.
    """
    if S <= H:
        total = None
        for d in fibres:
            piece = res_degree(d, S)
            total = piece if total is None else add_degrees(total, piece)
        return canonical(total)
    # f is fixed by S n H = H, so every value has stabilizer exactly H
    total = None
    for r in range(G.order // S):
        total = fibres[r] if total is None else add_degrees(total, fibres[r])
    return canonical(induce_degree(total, S))


def norm_orbits(H: int, G: CyclicGroup, B: Basis, max_dim: int | None = None) -> list[NormOrbit]:
    """Orbits of the coinduced indexing set with their cells."""
    if B.group.order != H or B.group.prime != G.prime:
        raise GroupError(f"basis is over {B.group}, expected the subgroup of order {H} of {G}")
    check_subgroup(G, H)
    items = [(c.label, c.stab) for c in B.cells]
    T = labelled_gset(B.group, items)
    by_label = {c.label: c for c in B.cells}
    X = coinduce_concrete(G, H, T)
    out = []
    for S, _, members in X.orbits():
        rep = min(members, key=lambda f: tuple((by_label[p[0]].dim, p[0], p[1]) for p in f))
        fibres = [by_label[p[0]].degree for p in rep]
        d = sum(x.dim for x in fibres)
        if max_dim is not None and d > max_dim:
            continue
        deg = _norm_degree(G, H, S, fibres)
        if deg.dim != d:
            raise BasisError(f"norm degree {deg} has dimension {deg.dim}, expected {d}")
        out.append(NormOrbit(rep, len(members), Cell(_norm_label(rep, B), S, deg), d))
    return out


def _norm_label(rep: tuple, B: Basis) -> str:
    parts = []
    stabs = {c.label: c.stab for c in B.cells}
    for label, coset in rep:
        if stabs[label] == B.group.order:
            parts.append(label)
        else:
            parts.append(f"{label}@{coset}")
    return "N(" + ",".join(parts) + ")"


def norm_basis(H: int, G: CyclicGroup, B: Basis, max_dim: int | None = None) -> Basis:
    """N_H^G of a free basis: cells indexed by orbits of Map^H(G, T_B).

    For regular (or integer) input degrees every orbit with stabilizer S and
    total underlying dimension d has degree (d/|S|) rho_S; divisibility is
    asserted.  Non-regular inputs are handled by the general rule of
    :func:`_norm_degree`, which may produce induced degrees.
    """
    if H == G.order:
        return B if max_dim is None else B.truncate(max_dim)
    orbs = norm_orbits(H, G, B, max_dim)
    regular_input = all(c.is_regular for c in B.cells)
    cells = []
    for o in orbs:
        if regular_input:
            S = o.cell.stab
            if o.underlying_dim % S:
                raise BasisError(f"norm orbit {o.cell.label}: dimension {o.underlying_dim} "
                                 f"not divisible by |H_f| = {S}")
            expect = RegDegree(S, o.underlying_dim // S, 0)
            if as_regular(o.cell.degree) != expect:
                raise BasisError(f"norm orbit {o.cell.label}: {o.cell.degree} != {expect}")
        cells.append(o.cell)
    return Basis(G, tuple(cells), B.coeff).sorted()


# ---------------------------------------------------------------------------
# duality


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith("'") else label + "'"


def dual_basis(B: Basis) -> Basis:
    """Same cells with negated degrees."""
    if not B.is_finite_type():
        raise BasisError("duality needs a basis of finite type")
    cells = tuple(Cell(_dual_label(c.label), c.stab, canonical(negate(c.degree))) for c in B.cells)
    return Basis(B.group, cells, B.coeff)


# ---------------------------------------------------------------------------
# homologically pure bases


def is_pure(B: Basis) -> bool:
    return all(c.is_regular for c in B.cells)


def homology_of_pure(B: Basis, K: int, k: int, eps: int, M: MackeyTable) -> MackeyTable:
    """The Mackey functor H_{k rho_K - eps}(E; M) for E with pure basis B.

    eps = 0: the sum of M_{G/K x G/J} over cells of underlying dimension k|K|.
    eps = 1: one copy of M_{G/e} for every double coset KgJ with K n J = e,
    over cells of underlying dimension k|K| - 1.
    """
    G = B.group
    if M.group != G:
        raise GroupError(f"Mackey functor over {M.group}, basis over {G}")
    check_subgroup(G, K)
    if eps not in (0, 1):
        raise DegreeError("eps must be 0 or 1")
    for c in B.cells:
        c.regular()
    n = k * K - eps
    parts = []
    for c in B.cells:
        if c.dim != n:
            continue
        J = c.stab
        if eps == 0:
            parts.append(eval_at_gset(M, orbit_product(G, K, J)))
        elif min(K, J) == 1:
            free = eval_at_gset(M, GSet.orbit(G, 1))
            parts.extend([free] * (G.order // max(K, J)))
    name = f"H_{{{k}rho[{K}]{'-1' if eps else ''}}}"
    if not parts:
        return zero_table(G, name)
    return direct_sum_all(G, parts, name)


def generalized_isotropic(B: Basis) -> bool:
    """No cells in adjacent dimensions n, n-1 whose orbit product has a free orbit."""
    by_dim: dict[int, list[int]] = {}
    for c in B.cells:
        by_dim.setdefault(c.dim, []).append(c.stab)
    for n, stabs in by_dim.items():
        below = by_dim.get(n - 1, [])
        if any(min(a, b) == 1 for a in stabs for b in below):
            return False
    return True


def isotropic_witness(B: Basis):
    """The first offending pair of cells, or None."""
    for c in B.cells:
        for d in B.cells:
            if d.dim == c.dim - 1 and min(c.stab, d.stab) == 1:
                return c, d
    return None


def is_isotropic(B: Basis) -> bool:
    """No cells induced from the trivial group (when G is nontrivial)."""
    return B.group.order == 1 or all(c.stab > 1 for c in B.cells)


@dataclass(frozen=True)
class PhiBasis:
    """Geometric fixed points: an integer-graded basis, with the labels of
    cells that came from kρ - 1 degrees."""

    basis: Basis
    flagged: tuple[str, ...] = field(default=())


def geometric_fixed_basis(B: Basis) -> PhiBasis:
    """Drop cells induced from e; a top cell of degree a + b sigma keeps its
    fixed dimension a (so k rho_2 - eps goes to k - eps)."""
    if B.group.order != 2:
        raise GroupError("geometric fixed points are implemented for C2")
    C1 = cyclic(1)
    cells, flagged = [], []
    for c in B.cells:
        if c.stab == 1:
            continue
        d = c.degree
        if isinstance(d, RegDegree):
            fixed = d.k - d.eps
            if d.eps:
                flagged.append(c.label)
        elif isinstance(d, DegreeC2):
            fixed = d.a
        else:
            raise DegreeError(f"no fixed-point dimension for {d}")
        cells.append(Cell(c.label, 1, integer_degree(fixed)))
    return PhiBasis(Basis(C1, tuple(cells), B.coeff), tuple(flagged))


def basis_table(B: Basis) -> list[tuple[str, str, str]]:
    """(label, orbit, degree) rows for display."""
    return [(c.label, f"{B.group}/{subgroup_name(c.stab)}", str(c.degree)) for c in B.cells]


__all__ = [
    "Basis", "BasisError", "Cell", "NormOrbit", "PhiBasis", "box", "dual_basis",
    "generalized_isotropic", "geometric_fixed_basis", "homology_of_pure", "induce_basis",
    "is_isotropic", "is_pure", "isotropic_witness", "norm_basis", "norm_orbits",
    "restrict_basis", "unit_basis", "basis_table",
]
