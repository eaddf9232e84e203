"""Mackey functors for cyclic p-groups and the RO(C2)-graded homology of a point.

A :class:`MackeyTable` stores, for every subgroup H (keyed by order), the
value M(G/H) as a list of cyclic orders (0 for a copy of Z), the restriction
and transfer matrices between consecutive subgroups, and the matrix of the
generator of G acting on M(G/H).  Composite restrictions and transfers are
products of consecutive ones.

Evaluation at a finite G-set and the induced maps of G-maps between orbits
are computed on concrete G-sets by tracking basepoints: for the orbit map
G/S -> G/S' sending the base coset to g + S',

    f_* = W^g o tr,      f^* = res o W^{-g}.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .grading import DegreeC2
from .groups import (
    ConcreteGSet,
    CyclicGroup,
    GroupError,
    GSet,
    coset_space,
    cyclic,
    concrete_product,
    realize,
    restrict_gset,
    subgroup_name,
    subgroups,
)
from .linalg import Matrix, homology, identity, matmul, transpose, zeros


class MackeyError(ValueError):
    pass


class UnsupportedConeError(MackeyError):
    """A product needs ring structure outside the positive cone."""


def _reduce_rows(A: Matrix, orders) -> Matrix:
    return [[x % o if o else x for x in row] for row, o in zip(A, orders)]


def _mat_pow(W: Matrix, e: int, n: int) -> Matrix:
    out = identity(n)
    base = W
    while e:
        if e & 1:
            out = matmul(out, base, n)
        base = matmul(base, base, n)
        e >>= 1
    return out


def _add(A: Matrix, B: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _block_diag(blocks: list[Matrix], rows: list[int], cols: list[int]) -> Matrix:
    out = zeros(sum(rows), sum(cols))
    r0 = c0 = 0
    for B, r, c in zip(blocks, rows, cols):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = B[i][j]
        r0 += r
        c0 += c
    return out


def describe_group(orders, field_char: int | None = None) -> str:
    """'Z^2 + Z/2', 'F2', '0'."""
    if not orders:
        return "0"
    if field_char and all(o == field_char for o in orders):
        n = len(orders)
        return f"F{field_char}" + (f"^{n}" if n > 1 else "")
    free = sum(1 for o in orders if o == 0)
    parts = []
    if free:
        parts.append("Z" + (f"^{free}" if free > 1 else ""))
    tors: dict[int, int] = {}
    for o in orders:
        if o:
            tors[o] = tors.get(o, 0) + 1
    for o in sorted(tors):
        n = tors[o]
        parts.append(f"Z/{o}" + (f"^{n}" if n > 1 else ""))
    return " + ".join(parts)


@dataclass(eq=False)
class MackeyTable:
    group: CyclicGroup
    levels: dict[int, tuple[int, ...]]
    res: dict[int, Matrix]
    tr: dict[int, Matrix]
    weyl: dict[int, Matrix]
    name: str = ""
    labels: dict[int, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for H in subgroups(self.group):
            if H not in self.levels:
                raise MackeyError(f"missing level {subgroup_name(H)}")
            self.levels[H] = tuple(self.levels[H])
            n = len(self.levels[H])
            self.weyl.setdefault(H, identity(n))
            if H > 1:
                m = len(self.levels[H // self.group.prime])
                self.res.setdefault(H, zeros(m, n))
                self.tr.setdefault(H, zeros(n, m))

    # -- basic access ------------------------------------------------------

    @property
    def field_char(self) -> int | None:
        """The prime p if every level is an F_p-vector space (integral
        coefficient tables keep writing Z/p)."""
        if self.name == "Z":
            return None
        p = self.group.prime
        allo = [o for H in self.levels for o in self.levels[H]]
        if allo and all(o == p for o in allo):
            return p
        if not allo and self.name.startswith("F"):
            return p
        return None

    def size(self, H: int) -> int:
        return len(self.levels[H])

    def rank(self, H: int) -> int:
        """Free rank, or dimension for F_p levels."""
        fc = self.field_char
        return len(self.levels[H]) if fc else sum(1 for o in self.levels[H] if o == 0)

    def describe(self, H: int) -> str:
        return describe_group(self.levels[H], self.field_char)

    def is_zero(self) -> bool:
        return all(not v for v in self.levels.values())

    def reduce(self, H: int, A: Matrix) -> Matrix:
        return _reduce_rows(A, self.levels[H])

    def res_map(self, H: int, K: int) -> Matrix:
        """res^H_K : M(G/H) -> M(G/K)."""
        if H % K:
            raise MackeyError(f"{subgroup_name(K)} is not a subgroup of {subgroup_name(H)}")
        p = self.group.prime
        out = identity(self.size(H))
        L = H
        while L > K:
            out = matmul(self.res[L], out, self.size(H))
            L //= p
        return self.reduce(K, out)

    def tr_map(self, K: int, H: int) -> Matrix:
        """tr_K^H : M(G/K) -> M(G/H)."""
        if H % K:
            raise MackeyError(f"{subgroup_name(K)} is not a subgroup of {subgroup_name(H)}")
        p = self.group.prime
        out = identity(self.size(K))
        L = K
        while L < H:
            out = matmul(self.tr[L * p], out, self.size(K))
            L *= p
        return self.reduce(H, out)

    def weyl_power(self, H: int, g: int) -> Matrix:
        period = self.group.order // H
        return self.reduce(H, _mat_pow(self.weyl[H], g % period, self.size(H)))

    def same_map(self, H: int, A: Matrix, B: Matrix) -> bool:
        """Equality of two maps into M(G/H)."""
        return self.reduce(H, A) == self.reduce(H, B)

    def direct_sum(self, other: "MackeyTable") -> "MackeyTable":
        if other.group != self.group:
            raise GroupError("Mackey tables over different groups")
        G = self.group
        p = G.prime
        lv, res, tr, wy, lab = {}, {}, {}, {}, {}
        for H in subgroups(G):
            lv[H] = self.levels[H] + other.levels[H]
            wy[H] = _block_diag([self.weyl[H], other.weyl[H]],
                                [self.size(H), other.size(H)], [self.size(H), other.size(H)])
            lab[H] = self.labels.get(H, [""] * self.size(H)) + other.labels.get(H, [""] * other.size(H))
            if H > 1:
                K = H // p
                res[H] = _block_diag([self.res[H], other.res[H]],
                                     [self.size(K), other.size(K)], [self.size(H), other.size(H)])
                tr[H] = _block_diag([self.tr[H], other.tr[H]],
                                    [self.size(H), other.size(H)], [self.size(K), other.size(K)])
        name = "+".join(n for n in (self.name, other.name) if n)
        return MackeyTable(G, lv, res, tr, wy, name, lab)

    def summary(self) -> dict[str, str]:
        return {subgroup_name(H): self.describe(H) for H in subgroups(self.group)}


def zero_table(G: CyclicGroup, name: str = "0") -> MackeyTable:
    return MackeyTable(G, {H: () for H in subgroups(G)}, {}, {}, {}, name)


def direct_sum_all(G: CyclicGroup, tables: list[MackeyTable], name: str = "") -> MackeyTable:
    out = zero_table(G, name)
    for T in tables:
        out = out.direct_sum(T)
    if name:
        out.name = name
    return out


# ---------------------------------------------------------------------------
# built-in functors


def constant(G: CyclicGroup, modulus: int | None = None) -> MackeyTable:
    """Constant Z (``modulus=None``) or Z/m: res = 1, tr = multiplication by p."""
    o = modulus or 0
    p = G.prime
    lv = {H: (o,) for H in subgroups(G)}
    res = {H: [[1]] for H in subgroups(G) if H > 1}
    tr = {H: [[p % o if o else p]] for H in subgroups(G) if H > 1}
    name = "Z" if modulus is None else (f"F{modulus}" if modulus == p else f"Z/{modulus}")
    return MackeyTable(G, lv, res, tr, {}, name)


def burnside(G: CyclicGroup) -> MackeyTable:
    """A(H) = Z{H/L : L <= H}, res by restricting H-sets, tr by inducing."""
    p = G.prime
    lv, res, tr = {}, {}, {}
    subs = subgroups(G)
    for H in subs:
        lv[H] = (0,) * len([L for L in subs if L <= H])
    for H in subs[1:]:
        K = H // p
        GH = G.subgroup(H)
        basis_H = [L for L in subs if L <= H]
        basis_K = [L for L in subs if L <= K]
        R = zeros(len(basis_K), len(basis_H))
        for j, L in enumerate(basis_H):
            r = restrict_gset(GH, K, GSet.orbit(GH, L))
            for s, m in r.orbits:
                R[basis_K.index(s)][j] += m
        T = zeros(len(basis_H), len(basis_K))
        for j, L in enumerate(basis_K):
            T[basis_H.index(L)][j] = 1
        res[H], tr[H] = R, T
    labels = {H: [f"[{subgroup_name(H)}/{subgroup_name(L)}]" for L in subs if L <= H] for H in subs}
    return MackeyTable(G, lv, res, tr, {}, "A", labels)


def dual(M: MackeyTable) -> MackeyTable:
    """Levelwise dual: res and tr are swapped and transposed."""
    orders = {o for H in M.levels for o in M.levels[H]}
    if len(orders) > 1 or (orders and next(iter(orders)) not in (0, M.group.prime)):
        raise MackeyError("dual is only implemented for free or elementary levels")
    G = M.group
    lv = dict(M.levels)
    res = {H: transpose(M.tr[H], M.size(H // G.prime)) for H in M.tr}
    tr = {H: transpose(M.res[H], M.size(H)) for H in M.res}
    wy = {}
    for H in subgroups(G):
        period = G.order // H
        inv = _mat_pow(M.weyl[H], period - 1, M.size(H))
        wy[H] = M.reduce(H, transpose(inv, M.size(H)))
    return MackeyTable(G, lv, res, tr, wy, (M.name or "M") + "*")


def builtin(name: str, G: CyclicGroup) -> MackeyTable:
    key = name.strip().lower()
    if key in ("z", "const-z"):
        return constant(G)
    if key in ("f2", "const-f2"):
        return constant(G, 2)
    if key in ("fp", "const-fp"):
        return constant(G, G.prime)
    if key in ("a", "burnside"):
        return burnside(G)
    if key in ("f2*", "dual-f2"):
        return dual(constant(G, 2))
    raise MackeyError(f"unknown coefficient functor {name!r}")


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    ok: bool
    witness: tuple[str, str] | None = None
    kind: str = ""
    lhs: Matrix | None = None
    rhs: Matrix | None = None

    def __bool__(self):
        return self.ok


def check_mackey_axioms(M: MackeyTable) -> AxiomReport:
    """Weyl periodicity, equivariance of res/tr, and the double coset formula.

    Returns the first offending pair ``(K, H)`` (subgroup names) on failure.
    """
    G = M.group
    N = G.order
    p = G.prime
    subs = subgroups(G)
    for H in subs:
        n = M.size(H)
        Wn = M.weyl_power(H, G.order // H)
        if Wn != M.reduce(H, identity(n)):
            return AxiomReport(False, (subgroup_name(H), subgroup_name(H)), "weyl-period", Wn, identity(n))
    for H in subs[1:]:
        K = H // p
        a = matmul(M.res[H], M.weyl[H], M.size(H))
        b = matmul(M.weyl[K], M.res[H], M.size(H))
        if not M.same_map(K, a, b):
            return AxiomReport(False, (subgroup_name(K), subgroup_name(H)), "res-weyl", a, b)
        a = matmul(M.tr[H], M.weyl[K], M.size(K))
        b = matmul(M.weyl[H], M.tr[H], M.size(K))
        if not M.same_map(H, a, b):
            return AxiomReport(False, (subgroup_name(K), subgroup_name(H)), "tr-weyl", a, b)
    # res^H_L tr^H_K = sum over L\H/K of tr^L_{L n K} c_g res^K_{L n K}
    for H in subs:
        for K in subs:
            if K > H:
                continue
            for L in subs:
                if L > H:
                    continue
                lhs = matmul(M.res_map(H, L), M.tr_map(K, H), M.size(K))
                m = min(L, K)
                rhs = zeros(M.size(L), M.size(K))
                for j in range(H // max(L, K)):
                    g = j * (N // H)
                    term = matmul(M.tr_map(m, L),
                                  matmul(M.weyl_power(m, g), M.res_map(K, m), M.size(K)),
                                  M.size(K))
                    rhs = _add(rhs, term)
                if not M.same_map(L, lhs, rhs):
                    return AxiomReport(False, (subgroup_name(min(K, L)), subgroup_name(H)),
                                       "double-coset", M.reduce(L, lhs), M.reduce(L, rhs))
    return AxiomReport(True)


# ---------------------------------------------------------------------------
# values on concrete G-sets


class _OrbitIndex:
    """Orbit decomposition of a concrete G-set with basepoint tracking."""

    def __init__(self, X: ConcreteGSet, M: MackeyTable):
        self.X = X
        self.orbits = X.orbits()
        self.where: dict[Hashable, tuple[int, int]] = {}
        self.offsets = []
        off = 0
        for idx, (stab, rep, members) in enumerate(self.orbits):
            for k, y in enumerate(members):
                self.where[y] = (idx, k)
            self.offsets.append(off)
            off += M.size(stab)
        self.dim = off
        self.orders = tuple(o for stab, _, _ in self.orbits for o in M.levels[stab])


def pushforward(M: MackeyTable, X: _OrbitIndex, Y: _OrbitIndex, phi: Callable) -> Matrix:
    """phi_* : M(X) -> M(Y) for a G-map phi."""
    out = zeros(Y.dim, X.dim)
    for i, (S, x, _) in enumerate(X.orbits):
        j, g = Y.where[phi(x)]
        S2 = Y.orbits[j][0]
        block = matmul(M.weyl_power(S2, g), M.tr_map(S, S2), M.size(S))
        r0, c0 = Y.offsets[j], X.offsets[i]
        for a, row in enumerate(block):
            for b, v in enumerate(row):
                out[r0 + a][c0 + b] += v
    return _reduce_rows(out, Y.orders)


def pullback(M: MackeyTable, X: _OrbitIndex, Y: _OrbitIndex, phi: Callable) -> Matrix:
    """phi^* : M(Y) -> M(X) for a G-map phi."""
    out = zeros(X.dim, Y.dim)
    for i, (S, x, _) in enumerate(X.orbits):
        j, g = Y.where[phi(x)]
        S2 = Y.orbits[j][0]
        block = matmul(M.res_map(S2, S), M.weyl_power(S2, -g), M.size(S2))
        r0, c0 = X.offsets[i], Y.offsets[j]
        for a, row in enumerate(block):
            for b, v in enumerate(row):
                out[r0 + a][c0 + b] += v
    return _reduce_rows(out, X.orders)


def eval_concrete(M: MackeyTable, T: ConcreteGSet, name: str = "") -> MackeyTable:
    """The Mackey functor M_T : G/H -> M(T x G/H)."""
    G = M.group
    if T.group != G:
        raise GroupError(f"G-set over {T.group}, Mackey functor over {G}")
    p = G.prime
    idx = {}
    for H in subgroups(G):
        idx[H] = _OrbitIndex(concrete_product(T, coset_space(G, H)), M)
    lv = {H: idx[H].orders for H in idx}
    res, tr, wy = {}, {}, {}
    for H in subgroups(G):
        m = G.order // H
        wy[H] = pushforward(M, idx[H], idx[H], lambda pt, m=m: (pt[0], (pt[1] + 1) % m))
        if H > 1:
            K = H // p
            q = lambda pt, m=m: (pt[0], pt[1] % m)
            res[H] = pullback(M, idx[K], idx[H], q)
            tr[H] = pushforward(M, idx[K], idx[H], q)
    return MackeyTable(G, lv, res, tr, wy, name or f"{M.name}_T")


def eval_at_gset(M: MackeyTable, T: GSet) -> MackeyTable:
    """M_T for a finite G-set given by its orbits."""
    if T.group != M.group:
        raise GroupError(f"G-set over {T.group}, Mackey functor over {M.group}")
    return eval_concrete(M, realize(T), f"{M.name}_[{T}]")


def value_at_gset(M: MackeyTable, T: GSet) -> tuple[int, ...]:
    """M(T) as a list of cyclic orders: the sum over orbits of M(G/stab)."""
    out: tuple[int, ...] = ()
    for stab, mult in T.orbits:
        out += M.levels[stab] * mult
    return out


# ---------------------------------------------------------------------------
# homology of a point, G = C2


def _sphere_complex(n: int, level: int, cochains: bool, modulus: int | None):
    """Reduced cellular (co)chains of S^{n sigma} at level e (1) or C2 (2).

    Cells: one fixed 0-cell, and a free pair {e_j, g e_j} for 1 <= j <= n with
    d e_1 = pt and d e_j = e_{j-1} + (-1)^{j-1} g e_{j-1}.  At level C2 the
    groups are the invariants, with basis pt and e_j + g e_j.

    Returns ``(dims, diff)`` where ``diff[j]`` is the (co)boundary leaving
    index j, as a matrix.
    """
    dims = [1] + ([2] * n if level == 1 else [1] * n)
    d = {}
    for j in range(1, n + 1):
        s = (-1) ** (j - 1)
        if level == 1:
            d[j] = [[1, 1]] if j == 1 else [[1, s], [s, 1]]
        else:
            d[j] = [[2]] if j == 1 else [[1 + s]]
    if not cochains:
        diff = d
    else:
        diff = {j - 1: transpose(d[j], dims[j - 1]) for j in d}
        if level == 2:
            # invariant cochains: basis pt*, (e_j)* + (g e_j)*
            diff = {j - 1: ([[1]] if j == 1 else [[1 + (-1) ** (j - 1)]]) for j in d}
    if modulus:
        diff = {j: [[x % modulus for x in r] for r in A] for j, A in diff.items()}
    return dims, diff


def _complex_homology(n, level, cochains, modulus, index):
    dims, diff = _sphere_complex(n, level, cochains, modulus)
    if index < 0 or index > n:
        return None, dims
    dim = dims[index]
    if not cochains:
        prev, nxt = index - 1, index + 1
        d_out = diff.get(index, [])
        d_in = diff.get(nxt, zeros(dim, 0))
    else:
        prev, nxt = index + 1, index - 1
        d_out = diff.get(index, [])
        d_in = diff.get(nxt, zeros(dim, 0))
    dim_prev = dims[prev] if 0 <= prev <= n else 0
    dim_next = dims[nxt] if 0 <= nxt <= n else 0
    if not dim_prev:
        d_out = []
    if not dim_next:
        d_in = zeros(dim, 0)
    return homology(d_out, d_in, dim_prev, dim, dim_next, modulus), dims


def _cell_res(index: int, v):
    # invariant coordinates -> underlying
    return list(v) if index == 0 else [v[0], v[0]]


def _cell_tr(index: int, v):
    return [2 * v[0]] if index == 0 else [v[0] + v[1]]


def _cell_g(index: int, v):
    return list(v) if index == 0 else [v[1], v[0]]


_POINT_CACHE: dict = {}
_POINT_LOCK = threading.Lock()


def _coeff_modulus(coeff: str) -> int | None:
    c = coeff.strip().lower()
    if c in ("f2", "z/2"):
        return 2
    if c == "z":
        return None
    raise MackeyError(f"coefficients must be f2 or z, got {coeff!r}")


def point_homology(coeff: str, D: DegreeC2) -> MackeyTable:
    """pi_{a + b sigma} of HM for M the constant C2-Mackey functor Z or F2.

    For b <= 0 this is the reduced Bredon homology of S^{|b| sigma} in degree a,
    for b > 0 the reduced Bredon cohomology of S^{b sigma} in degree -a.
    """
    modulus = _coeff_modulus(coeff)
    if not isinstance(D, DegreeC2):
        D = DegreeC2(*D)
    key = (modulus, D.a, D.b)
    with _POINT_LOCK:
        hit = _POINT_CACHE.get(key)
        if hit is None:
            hit = _point_homology(modulus, D.a, D.b)
            _POINT_CACHE[key] = hit
    return hit


def _point_homology(modulus, a, b) -> MackeyTable:
    G = cyclic(2)
    cochains = b > 0
    n = abs(b)
    index = -a if cochains else a
    He, _ = _complex_homology(n, 1, cochains, modulus, index)
    Hg, _ = _complex_homology(n, 2, cochains, modulus, index)
    if He is None:
        return MackeyTable(G, {1: (), 2: ()}, {}, {}, {}, "F2" if modulus else "Z")
    lv = {1: He.orders, 2: Hg.orders}
    res = [He.coords(_cell_res(index, v)) for v in Hg.gens]
    tr = [Hg.coords(_cell_tr(index, v)) for v in He.gens]
    wy = [He.coords(_cell_g(index, v)) for v in He.gens]
    table = MackeyTable(
        G, lv,
        {2: transpose([list(c) for c in res], len(He.orders))},
        {2: transpose([list(c) for c in tr], len(Hg.orders))},
        {1: transpose([list(c) for c in wy], len(He.orders)), 2: identity(len(Hg.orders))},
        "F2" if modulus else "Z",
    )
    table.labels = {2: [_point_class_name(modulus, a, b)] * len(Hg.orders)}
    return table


def _point_class_name(modulus, a, b) -> str:
    if b <= 0 and 0 <= a <= -b:
        i, j = -b - a, a
        if modulus is None and j % 2:
            return ""
        parts = []
        if i:
            parts.append("a_s" + (f"^{i}" if i > 1 else ""))
        if j:
            u = "u_s" if modulus else "u_2s"
            e = j if modulus else j // 2
            parts.append(u + (f"^{e}" if e > 1 else ""))
        return "*".join(parts) or "1"
    return ""


# -- the oracle: transposed cell complex through the generic Mackey machinery


def _cell_orbits(n: int):
    G = cyclic(2)
    cells = {0: coset_space(G, 2)}
    for j in range(1, n + 1):
        cells[j] = coset_space(G, 1)
    return G, cells


def _cell_boundary(j: int):
    """d_j as a list of (coefficient, G-map) between cell orbits."""
    if j == 1:
        return [(1, lambda x: 0)]
    s = (-1) ** (j - 1)
    return [(1, lambda x: x), (s, lambda x: (x + 1) % 2)]


def point_homology_dual(coeff: str, D: DegreeC2) -> dict[int, int]:
    """Dimensions of the F2 point homology at levels e and C2, computed from
    the opposite-variance complex with the dual Mackey functor.

    Over a field, homology of C_*(M) and cohomology of C^*(M^*) are
    transposes of each other, so dimensions must match those of
    :func:`point_homology`.
    """
    if _coeff_modulus(coeff) != 2:
        raise MackeyError("the dual oracle is over F2")
    if not isinstance(D, DegreeC2):
        D = DegreeC2(*D)
    G, cells = _cell_orbits(abs(D.b))
    Mstar = dual(constant(G, 2))
    n = abs(D.b)
    primary_cochains = D.b > 0
    index = -D.a if primary_cochains else D.a
    out = {}
    for L in (1, 2):
        idx = {j: _OrbitIndex(concrete_product(cells[j], coset_space(G, L)), Mstar)
               for j in cells}

        def lift(phi):
            return lambda pt: (phi(pt[0]), pt[1])

        def boundary(j):
            # map C_j -> C_{j-1} (homology) built from pushforwards
            M = zeros(idx[j - 1].dim, idx[j].dim)
            for c, phi in _cell_boundary(j):
                P = pushforward(Mstar, idx[j], idx[j - 1], lift(phi))
                M = [[x + c * y for x, y in zip(r, s)] for r, s in zip(M, P)]
            return [[x % 2 for x in r] for r in M]

        def coboundary(j):
            # map C^{j-1} -> C^j built from pullbacks
            M = zeros(idx[j].dim, idx[j - 1].dim)
            for c, phi in _cell_boundary(j):
                P = pullback(Mstar, idx[j], idx[j - 1], lift(phi))
                M = [[x + c * y for x, y in zip(r, s)] for r, s in zip(M, P)]
            return [[x % 2 for x in r] for r in M]

        if index < 0 or index > n:
            out[L] = 0
            continue
        dim = idx[index].dim
        if primary_cochains:
            # dual variance: homology of C_*(M*)
            d_out = boundary(index) if index >= 1 else []
            d_in = boundary(index + 1) if index + 1 <= n else zeros(dim, 0)
            dp = idx[index - 1].dim if index >= 1 else 0
            dn = idx[index + 1].dim if index + 1 <= n else 0
        else:
            d_out = coboundary(index + 1) if index + 1 <= n else []
            d_in = coboundary(index) if index >= 1 else zeros(dim, 0)
            dp = idx[index + 1].dim if index + 1 <= n else 0
            dn = idx[index - 1].dim if index >= 1 else 0
        out[L] = homology(d_out, d_in, dp, dim, dn, 2).rank
    return out


def point_f2_closed_form(D: DegreeC2) -> dict[int, int]:
    """Known shape of pi_* HF2 for C2: positive cone a^i u^j, negative cone
    theta / (a^i u^j), underlying F2 exactly in total dimension 0."""
    a, b = D.a, D.b
    top = 0
    if b <= 0 and 0 <= a <= -b:
        top = 1
    if b >= 2 and -b <= a <= -2:
        top = 1
    return {1: 1 if a + b == 0 else 0, 2: top}


# ---------------------------------------------------------------------------
# the point ring on the positive cone


@dataclass(frozen=True, order=True)
class PointClass:
    """a_sigma^i u^j in degree (j, -i-j).

    Over F2, u is u_sigma; over Z only even powers of u_sigma exist (u_{2 sigma}
    and its powers), and any positive power of a_sigma is 2-torsion.
    """

    a_exp: int = 0
    u_exp: int = 0

    def __post_init__(self):
        if self.a_exp < 0 or self.u_exp < 0:
            raise UnsupportedConeError("negative exponents are outside the positive cone")

    @property
    def degree(self) -> DegreeC2:
        return DegreeC2(self.u_exp, -self.a_exp - self.u_exp)

    def __mul__(self, other: "PointClass") -> "PointClass":
        return PointClass(self.a_exp + other.a_exp, self.u_exp + other.u_exp)

    @property
    def is_unit(self) -> bool:
        return self.a_exp == 0 and self.u_exp == 0

    def __str__(self):
        parts = []
        if self.a_exp:
            parts.append("a_s" + (f"^{self.a_exp}" if self.a_exp > 1 else ""))
        if self.u_exp:
            parts.append("u_s" + (f"^{self.u_exp}" if self.u_exp > 1 else ""))
        return "*".join(parts) or "1"


A_SIGMA = PointClass(1, 0)
U_SIGMA = PointClass(0, 1)
ONE = PointClass(0, 0)


class PointRingC2:
    """RO(C2)-graded coefficients of constant F2 or Z, with positive-cone
    multiplication.  Additive data comes from :func:`point_homology`."""

    def __init__(self, coeff: str = "f2"):
        self.modulus = _coeff_modulus(coeff)
        self.coeff = "F2" if self.modulus else "Z"

    def table(self, D: DegreeC2) -> MackeyTable:
        return point_homology(self.coeff, D)

    def exists(self, c: PointClass) -> bool:
        if self.modulus is None and c.u_exp % 2:
            return False
        return self.table(c.degree).size(2) > 0

    def order(self, c: PointClass) -> int:
        """Additive order of the class: 0 for infinite."""
        if not self.exists(c):
            raise UnsupportedConeError(f"{c} is not a class over {self.coeff}")
        if self.modulus:
            return 2
        return 2 if c.a_exp else 0

    def multiply(self, x: PointClass, y: PointClass) -> PointClass:
        if not isinstance(x, PointClass) or not isinstance(y, PointClass):
            raise UnsupportedConeError("products outside the positive cone are not supported")
        z = x * y
        if not self.exists(z):
            raise UnsupportedConeError(f"{x} * {y} has no class over {self.coeff}")
        return z

    def restrict(self, c: PointClass) -> int:
        """Image in the underlying ring: a_sigma -> 0, u -> 1."""
        return 0 if c.a_exp else 1

    def reduce_coeff(self, c: PointClass, n: int) -> int:
        o = 2 if self.modulus else (2 if c.a_exp else 0)
        return n % o if o else n
