"""Exact linear algebra over Z and F_p.

Matrices are lists of rows of Python ints.  ``modulus=None`` means Z,
otherwise the prime field F_p.  Smith normal form is computed with explicit
unimodular transforms so that homology groups come with generators and a
coordinate map, which is what induced maps (restriction, transfer) need.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

Matrix = list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def matmul(A: Matrix, B: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else (ncols or 0)
    out = zeros(len(A), n)
    for i, row in enumerate(A):
        o = out[i]
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        o[j] += a * b
    return out


def matvec(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v) if a) for row in A]


def transpose(A: Matrix, nrows: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(nrows)]
    return [list(c) for c in zip(*A)]


def reduce_mod(A: Matrix, modulus: int | None) -> Matrix:
    if modulus is None:
        return [list(r) for r in A]
    return [[x % modulus for x in r] for r in A]


@dataclass
class SmithForm:
    """U A V = D with U, V invertible over the ring; ``diag`` are the pivots."""

    diag: list[int]
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix

    @property
    def rank(self) -> int:
        return len(self.diag)


def smith(A: Matrix, nrows: int, ncols: int, modulus: int | None = None) -> SmithForm:
    m, n = nrows, ncols
    D = reduce_mod(A, modulus) if A else zeros(m, n)
    U, Uinv, V, Vinv = identity(m), identity(m), identity(n), identity(n)
    p = modulus

    def norm(x):
        return x % p if p else x

    def row_add(i, k, q):  # row_i += q row_k
        if not q:
            return
        Di, Dk = D[i], D[k]
        for j in range(n):
            if Dk[j]:
                Di[j] = norm(Di[j] + q * Dk[j])
        Ui, Uk = U[i], U[k]
        for j in range(m):
            if Uk[j]:
                Ui[j] = norm(Ui[j] + q * Uk[j])
        for r in Uinv:
            if r[i]:
                r[k] = norm(r[k] - q * r[i])

    def row_swap(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]
        for r in Uinv:
            r[i], r[k] = r[k], r[i]

    def row_scale(i, c, cinv):
        D[i] = [norm(x * c) for x in D[i]]
        U[i] = [norm(x * c) for x in U[i]]
        for r in Uinv:
            r[i] = norm(r[i] * cinv)

    def col_add(j, l, q):  # col_j += q col_l
        if not q:
            return
        for r in D:
            if r[l]:
                r[j] = norm(r[j] + q * r[l])
        for r in V:
            if r[l]:
                r[j] = norm(r[j] + q * r[l])
        Vj, Vl = Vinv[j], Vinv[l]
        for k in range(n):
            if Vj[k]:
                Vl[k] = norm(Vl[k] - q * Vj[k])

    def col_swap(j, l):
        for r in D:
            r[j], r[l] = r[l], r[j]
        for r in V:
            r[j], r[l] = r[l], r[j]
        Vinv[j], Vinv[l] = Vinv[l], Vinv[j]

    diag = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j, x in enumerate(D[i][t:], start=t):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        while True:
            piv = D[t][t]
            if p:
                inv = pow(piv, -1, p)
                if piv != 1:
                    row_scale(t, inv, piv)
                piv = 1
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // piv) if not p else -D[i][t])
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // piv) if not p else -D[t][j])
                    if D[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder appeared; move it to the pivot spot
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                _, k, kind = best
                if kind == "r" and k != t:
                    row_swap(t, k)
                elif kind == "c" and k != t:
                    col_swap(t, k)
                continue
            if not p:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_add(t, bad, 1)
                    continue
            break
        if not p and D[t][t] < 0:
            row_scale(t, -1, -1)
        diag.append(D[t][t])
        t += 1
    return SmithForm(diag, U, Uinv, V, Vinv)


def rank(A: Matrix, nrows: int, ncols: int, modulus: int | None = None) -> int:
    if modulus == 2:
        return _rank_f2(A)
    if modulus is None:
        # rank over Q equals rank mod a large prime for these small entries
        return _rank_mod(A, 2_147_483_647)
    return _rank_mod(A, modulus)


def _rank_f2(A: Matrix) -> int:
    rows = []
    for r in A:
        v = 0
        for j, x in enumerate(r):
            if x & 1:
                v |= 1 << j
        if v:
            rows.append(v)
    r = 0
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                r += 1
                break
    return r


def _rank_mod(A: Matrix, p: int) -> int:
    rows = [[x % p for x in r] for r in A if any(r)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def invariant_factors(A: Matrix, nrows: int, ncols: int) -> list[int]:
    """Nonzero Smith invariants of an integer matrix."""
    if not A or nrows == 0 or ncols == 0:
        return []
    return smith(A, nrows, ncols).diag


@dataclass
class Homology:
    """ker(d_out) / im(d_in) with explicit generators.

    ``orders[i]`` is 0 for a Z summand, otherwise the order of the cyclic
    summand generated by ``gens[i]`` (a vector in the chain group).
    """

    orders: tuple[int, ...]
    gens: list[list[int]]
    modulus: int | None
    _Vinv: Matrix = field(repr=False, default_factory=list)
    _r: int = 0
    _P: Matrix = field(repr=False, default_factory=list)
    _keep: list[int] = field(repr=False, default_factory=list)

    @property
    def rank(self) -> int:
        """Free rank over Z, dimension over F_p."""
        if self.modulus:
            return len(self.orders)
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        if self.modulus:
            return ()
        return tuple(o for o in self.orders if o)

    def coords(self, cycle: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of a cycle in terms of ``gens``."""
        c = matvec(self._Vinv, cycle)[self._r:]
        y = matvec(self._P, c) if self._P else []
        out = []
        for idx, o in zip(self._keep, self.orders):
            v = y[idx]
            if self.modulus:
                v %= self.modulus
            elif o:
                v %= o
            out.append(v)
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.orders


def homology(d_out: Matrix, d_in: Matrix, dim_prev: int, dim: int, dim_next: int,
             modulus: int | None = None) -> Homology:
    """Homology at C_n for C_{n+1} --d_in--> C_n --d_out--> C_{n-1}.

    ``d_out`` has shape (dim_prev, dim); ``d_in`` has shape (dim, dim_next).
    """
    S = smith(d_out if dim_prev else [], dim_prev, dim, modulus) if dim else None
    if S is None:
        return Homology((), [], modulus)
    r = S.rank
    k = dim - r
    K_cols = [[S.V[i][j] for i in range(dim)] for j in range(r, dim)]  # kernel basis
    if dim_next:
        img = matmul(S.Vinv, d_in)
        R = [img[i] for i in range(r, dim)]
    else:
        R = zeros(k, 0)
    if k == 0:
        return Homology((), [], modulus, S.Vinv, r, [], [])
    T = smith(R, k, dim_next, modulus)
    orders, gens, keep = [], [], []
    for i in range(k):
        if i < T.rank:
            d = T.diag[i]
            if modulus or abs(d) == 1:
                continue
            o = abs(d)
        else:
            o = modulus or 0
        # generator = K * Pinv[:, i]
        col = [T.Uinv[row][i] for row in range(k)]
        g = [0] * dim
        for coeff, kv in zip(col, K_cols):
            if coeff:
                for t in range(dim):
                    g[t] += coeff * kv[t]
        if modulus:
            g = [x % modulus for x in g]
        orders.append(o if not modulus else modulus)
        gens.append(g)
        keep.append(i)
    return Homology(tuple(orders), gens, modulus, S.Vinv, r, T.U, keep)


def homology_ranks(d_out: Matrix, d_in: Matrix, dim_prev: int, dim: int, dim_next: int,
                   modulus: int | None = None) -> tuple[int, tuple[int, ...]]:
    """(rank, torsion) of homology without computing generators."""
    r_out = rank(d_out, dim_prev, dim, modulus) if dim_prev and dim else 0
    if modulus is not None:
        r_in = rank(d_in, dim, dim_next, modulus) if dim and dim_next else 0
        return dim - r_out - r_in, ()
    inv = invariant_factors(d_in, dim, dim_next) if dim and dim_next else []
    torsion = tuple(sorted(abs(d) for d in inv if abs(d) > 1))
    return dim - r_out - len(inv), torsion
