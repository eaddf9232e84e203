"""E2 pages of Tor spectral sequences and the BBU_R extension step.

The engine is the two-sided Koszul complex: for a polynomial algebra A on
generators g and A-modules X, Y (free over the base, with the action given by
structure constants on cells),

    Tor^A(X, Y) = H( X (x) E(ybar_g) (x) Y ),   d ybar_g = g (x) 1 - 1 (x) g.

Everything is graded by cell degree; truncation is by the absolute
underlying dimension of the internal degree.  Over Z homology comes from a
Smith normal form, so torsion is reported.

The normalized bar complex of A, computed independently in
:func:`bar_complex_tor`, serves as a brute-force check of the engine.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .freebasis import Basis, Cell, generalized_isotropic, isotropic_witness, norm_basis
from .grading import (
    Degree,
    DegreeC2,
    DegreeError,
    RegDegree,
    add_degrees,
    canonical,
    integer_degree,
    negate,
    same_degree,
    sort_key,
    to_full_c2,
)
from .groups import MAX_COINDUCE_INDEX, CyclicGroup, GroupError, cyclic
from .linalg import homology, homology_ranks
from .purering import (
    DLError,
    GenSpec,
    PureRingModel,
    RuleSpec,
    dyer_lashof,
    expand_basis,
)

E2_MARKER = "E2 page, no convergence asserted"
DEFAULT_TRUNC = 12
MAX_TRUNC = 16


class SpecSeqError(ValueError):
    pass


def default_truncation() -> int:
    raw = os.environ.get("EQUIHOM_TRUNC")
    if raw is None or raw == "":
        return DEFAULT_TRUNC
    try:
        return int(raw)
    except ValueError:
        raise SpecSeqError(f"EQUIHOM_TRUNC must be an integer, got {raw!r}") from None


def check_truncation(trunc: int, limit: int = MAX_TRUNC) -> int:
    if trunc < 0:
        raise SpecSeqError("truncation must be non-negative")
    if trunc > limit:
        raise SpecSeqError(f"truncation {trunc} exceeds the resource guard ({limit}); "
                           f"lower --trunc")
    return trunc


def _dadd(x: Degree, y: Degree) -> Degree:
    return canonical(add_degrees(x, y))


def _zero(G: CyclicGroup) -> Degree:
    return canonical(RegDegree(G.order, 0, 0))


# ---------------------------------------------------------------------------
# algebras and modules


@dataclass(frozen=True)
class GradedPolyAlgebra:
    """Polynomial algebra over the base on top cells."""

    group: CyclicGroup
    coeff: str
    gens: tuple[tuple[str, Degree], ...] = ()

    def __post_init__(self):
        if self.coeff not in ("Z", "F2"):
            raise SpecSeqError(f"coefficients must be Z or F2, got {self.coeff!r}")
        seen = set()
        for name, d in self.gens:
            if name in seen:
                raise SpecSeqError(f"duplicate generator {name}")
            seen.add(name)
            if d.dim == 0:
                raise SpecSeqError(f"generator {name} has underlying dimension 0")
            if d.stab != self.group.order:
                raise SpecSeqError(f"generator {name} must be a top cell; normed rings "
                                   f"go through twisted_bar_e2")
        signs = {d.dim > 0 for _, d in self.gens}
        if len(signs) > 1:
            raise SpecSeqError("generators must all have positive or all negative dimension")

    @property
    def modulus(self) -> int | None:
        return 2 if self.coeff == "F2" else None

    def degree(self, name: str) -> Degree:
        for n, d in self.gens:
            if n == name:
                return d
        raise KeyError(name)

    def names(self) -> list[str]:
        return [n for n, _ in self.gens]

    def monomials(self, trunc: int) -> list[tuple[tuple[str, int], ...]]:
        """Monomials of weight at most trunc (weight = |underlying dim|)."""
        out = []

        def rec(k, budget, cur):
            if k == len(self.gens):
                out.append(tuple(cur))
                return
            name, d = self.gens[k]
            w = abs(d.dim)
            e = 0
            while e * w <= budget:
                if e:
                    cur.append((name, e))
                rec(k + 1, budget - e * w, cur)
                if e:
                    cur.pop()
                e += 1

        rec(0, trunc, [])
        return out

    def mono_degree(self, m) -> Degree:
        d = _zero(self.group)
        for name, e in m:
            for _ in range(e):
                d = _dadd(d, self.degree(name))
        return d


def mono_label(m) -> str:
    if not m:
        return "1"
    return "*".join(n + (f"^{e}" if e > 1 else "") for n, e in m)


def algebra_from_model(model: PureRingModel, trunc: int) -> GradedPolyAlgebra:
    """The polynomial algebra on the model's generators up to an underlying degree.

    Requires a relation-free model: Tor here is over a polynomial algebra.
    """
    if model._rules or model._schemas:
        raise SpecSeqError("the Koszul engine needs a polynomial (relation-free) model")
    gens = tuple((g.name, g.degree) for g in model.generators(trunc))
    return GradedPolyAlgebra(model.group, model.coeff, gens)


@dataclass(frozen=True)
class GradedModule:
    """A module free over the base on ``cells``, with A acting by
    ``action[g][cell] = {cell': coeff}``."""

    algebra: GradedPolyAlgebra
    cells: tuple[tuple[str, Degree], ...]
    action: dict = field(default_factory=dict, hash=False, compare=False)
    name: str = ""

    def __post_init__(self):
        labels = [c for c, _ in self.cells]
        if len(set(labels)) != len(labels):
            raise SpecSeqError("duplicate module cell labels")
        deg = dict(self.cells)
        for g, table in self.action.items():
            gd = self.algebra.degree(g)
            for c, image in table.items():
                for c2, v in image.items():
                    if not v:
                        continue
                    if c2 not in deg:
                        continue  # beyond the module's truncation
                    if not same_degree(_dadd(gd, deg[c]), deg[c2]):
                        raise SpecSeqError(f"action not degree-compatible: {g}*{c} -> {c2}")

    def degree(self, label: str) -> Degree:
        return dict(self.cells)[label]

    def act(self, g: str, c: str) -> dict:
        return self.action.get(g, {}).get(c, {})


def base_module(A: GradedPolyAlgebra) -> GradedModule:
    """The base ring with A acting through the augmentation."""
    return GradedModule(A, (("1", _zero(A.group)),), {}, "base")


def free_module(A: GradedPolyAlgebra, trunc: int) -> GradedModule:
    """A itself, truncated."""
    mons = A.monomials(trunc)
    labels = {m: mono_label(m) for m in mons}
    cells = tuple((labels[m], A.mono_degree(m)) for m in mons)
    action: dict = {}
    for g in A.names():
        tab = {}
        for m in mons:
            d = dict(m)
            d[g] = d.get(g, 0) + 1
            prod = tuple((n, d[n]) for n in A.names() if d.get(n))
            if prod in labels:
                tab[labels[m]] = {labels[prod]: 1}
        action[g] = tab
    return GradedModule(A, cells, action, "free")


def module_via(B: GradedPolyAlgebra, A: GradedPolyAlgebra, images: dict, trunc: int) -> GradedModule:
    """A (truncated) as a B-module through a ring map sending each generator
    of B to ``coeff * generator of A``: ``images[b] = (a, coeff)``."""
    M = free_module(A, trunc)
    action = {}
    for b, (a, c) in images.items():
        if not same_degree(B.degree(b), A.degree(a)):
            raise SpecSeqError(f"action not degree-compatible: {b} -> {a}")
        action[b] = {x: {y: v * c for y, v in img.items()} for x, img in M.action[a].items()}
    return GradedModule(B, M.cells, action, "via")


def tensor_module(X: GradedModule, Y: GradedModule, B: GradedPolyAlgebra, left: dict,
                  right: dict, trunc: int) -> GradedModule:
    """X (x) Y over B, where generators in ``left`` act on X through the map
    ``left[b] = a`` and generators in ``right`` act on Y."""
    cells, action = [], {b: {} for b in list(left) + list(right)}
    for x, dx in X.cells:
        for y, dy in Y.cells:
            if abs(dx.dim) + abs(dy.dim) <= trunc:
                cells.append((f"{x}|{y}", _dadd(dx, dy)))
    present = {c for c, _ in cells}
    for x, _ in X.cells:
        for y, _ in Y.cells:
            lab = f"{x}|{y}"
            if lab not in present:
                continue
            for b, a in left.items():
                img = {f"{x2}|{y}": v for x2, v in X.act(a, x).items()}
                if img:
                    action[b][lab] = img
            for b, a in right.items():
                img = {f"{x}|{y2}": v for y2, v in Y.act(a, y).items()}
                if img:
                    action[b][lab] = img
    return GradedModule(B, tuple(cells), action, "tensor")


# ---------------------------------------------------------------------------
# pages


@dataclass(frozen=True)
class TorEntry:
    rank: int
    torsion: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()


@dataclass
class TorPage:
    kind: str
    group: str
    coeff: str
    truncation: int
    entries: dict = field(default_factory=dict)  # (s, Degree) -> TorEntry
    exterior: bool = False
    marker: str = E2_MARKER
    checks: dict = field(default_factory=dict)

    def rank(self, s: int, D: Degree) -> int:
        for (s2, D2), e in self.entries.items():
            if s2 == s and same_degree(D2, D):
                return e.rank
        return 0

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda kv: (-kv[0][0], sort_key(kv[0][1])))

    def filtrations(self) -> list[int]:
        return sorted({s for s, _ in self.entries}, reverse=True)

    def generators(self) -> list[tuple[str, Degree]]:
        """Filtration -1 classes represented by a single ybar."""
        out = []
        for (s, D), e in self.sorted_items():
            if s == -1:
                for lab in e.labels:
                    out.append((lab, D))
        return out

    def is_empty(self) -> bool:
        return not self.entries


def suspension_names(names: Iterable[str]) -> dict[str, str]:
    """abar3 -> ybar3; other names get a y_ prefix."""
    import re
    out = {}
    for n in names:
        m = re.fullmatch(r"[A-Za-z]+?(?:bar)?(\d+)(@\d+)?", n)
        out[n] = f"ybar{m.group(1)}{m.group(2) or ''}" if m else f"y_{n}"
    if len(set(out.values())) != len(out):
        out = {n: f"y_{n}" for n in names}
    return out


def _chain_label(x: str, ys: list[str], y: str) -> str:
    parts = []
    if x != "1":
        parts.append(x)
    if ys:
        parts.append("*".join(ys))
    if y != "1":
        parts.append(y)
    return " | ".join(parts) if parts else "1"


def _vector_label(vec, labels, modulus) -> str:
    terms = [(i, v) for i, v in enumerate(vec) if v]
    if len(terms) == 1 and terms[0][1] in (1, -1) or (modulus and len(terms) == 1):
        i, v = terms[0]
        return labels[i] if v == 1 or modulus else "-" + labels[i]
    body = ""
    for i, v in terms:
        mag = labels[i] if abs(v) == 1 else f"{abs(v)}*{labels[i]}"
        if not body:
            body = mag if v > 0 else "-" + mag
        else:
            body += (" + " if v > 0 else " - ") + mag
    return "[" + body + "]"


def koszul_tor(A: GradedPolyAlgebra, X: GradedModule, Y: GradedModule, trunc: int,
               kind: str = "tor", labels: bool = True) -> TorPage:
    """Tor^A(X, Y) through the two-sided Koszul complex, degreewise."""
    check_truncation(trunc, max(MAX_TRUNC, trunc) if kind == "internal" else MAX_TRUNC)
    gens = [(n, d) for n, d in A.gens if abs(d.dim) <= trunc]
    ynames = suspension_names([n for n, _ in gens])
    mod = A.modulus
    # chain basis grouped by (n = |S|, degree)
    groups: dict = {}
    for x, dx in X.cells:
        wx = abs(dx.dim)
        if wx > trunc:
            continue
        for y, dy in Y.cells:
            wy = abs(dy.dim)
            if wx + wy > trunc:
                continue
            base = _dadd(dx, dy)
            budget = trunc - wx - wy
            for S in _subsets(gens, budget):
                D = base
                for i in S:
                    D = _dadd(D, gens[i][1])
                groups.setdefault(D, {}).setdefault(len(S), []).append((x, S, y))
    entries = {}
    for D in sorted(groups, key=sort_key):
        by_n = groups[D]
        index = {n: {b: i for i, b in enumerate(v)} for n, v in by_n.items()}
        top = max(by_n)
        mats = {n: _koszul_matrix(A, X, Y, gens, by_n[n], index.get(n - 1, {}), mod)
                for n in range(1, top + 1) if n in by_n}
        for n in sorted(by_n):
            dim = len(by_n[n])
            dim_prev = len(by_n.get(n - 1, ()))
            dim_next = len(by_n.get(n + 1, ()))
            d_out = mats.get(n, [])
            d_in = mats.get(n + 1, [])
            if labels:
                H = homology(d_out, d_in, dim_prev, dim, dim_next, mod)
                rk, tors = H.rank, H.torsion
                names = [_chain_label(x, [ynames[gens[i][0]] for i in S], y) for x, S, y in by_n[n]]
                labs = tuple(_vector_label(g, names, mod) for g in H.gens)
            else:
                rk, tors = homology_ranks(d_out, d_in, dim_prev, dim, dim_next, mod)
                labs = ()
            if rk or tors:
                entries[(-n, D)] = TorEntry(rk, tuple(tors), labs)
    return TorPage(kind, str(A.group), A.coeff, trunc, entries)


def _subsets(gens, budget):
    """Index tuples of generator subsets with total weight <= budget."""
    w = [abs(d.dim) for _, d in gens]
    out = []

    def rec(k, left, cur):
        if k == len(gens):
            out.append(tuple(cur))
            return
        rec(k + 1, left, cur)
        if w[k] <= left:
            cur.append(k)
            rec(k + 1, left - w[k], cur)
            cur.pop()

    rec(0, budget, [])
    return out


def _koszul_matrix(A, X, Y, gens, src, tgt_index, mod):
    """Matrix of d: C_n -> C_{n-1} with shape (len(tgt), len(src))."""
    rows = len(tgt_index)
    M = [[0] * len(src) for _ in range(rows)]
    for j, (x, S, y) in enumerate(src):
        for pos, gi in enumerate(S):
            sign = -1 if pos % 2 else 1
            rest = S[:pos] + S[pos + 1:]
            g = gens[gi][0]
            for x2, v in X.act(g, x).items():
                i = tgt_index.get((x2, rest, y))
                if i is not None:
                    M[i][j] += sign * v
            for y2, v in Y.act(g, y).items():
                i = tgt_index.get((x, rest, y2))
                if i is not None:
                    M[i][j] -= sign * v
    if mod:
        M = [[v % mod for v in r] for r in M]
    return M


def koszul_euler(A: GradedPolyAlgebra, X: GradedModule, Y: GradedModule, trunc: int) -> dict:
    """Sum of (-1)^n dim C_n per internal degree."""
    gens = [(n, d) for n, d in A.gens if abs(d.dim) <= trunc]
    out: dict = {}
    for x, dx in X.cells:
        for y, dy in Y.cells:
            if abs(dx.dim) + abs(dy.dim) > trunc:
                continue
            for S in _subsets(gens, trunc - abs(dx.dim) - abs(dy.dim)):
                D = _dadd(dx, dy)
                for i in S:
                    D = _dadd(D, gens[i][1])
                out[D] = out.get(D, 0) + (-1) ** len(S)
    return out


def page_euler(page: TorPage) -> dict:
    out: dict = {}
    for (s, D), e in page.entries.items():
        out[D] = out.get(D, 0) + (-1) ** (-s) * e.rank
    return out


def exterior_ranks(A: GradedPolyAlgebra, trunc: int) -> dict:
    """Closed form: E(ybar_g), ybar_g in bidegree (-1, deg g)."""
    gens = [(n, d) for n, d in A.gens if abs(d.dim) <= trunc]
    out: dict = {}
    for S in _subsets(gens, trunc):
        D = _zero(A.group)
        for i in S:
            D = _dadd(D, gens[i][1])
        out[(-len(S), D)] = out.get((-len(S), D), 0) + 1
    return out


def _same_ranks(page: TorPage, ranks: dict) -> bool:
    got = {k: e.rank for k, e in page.entries.items() if e.rank}
    if any(e.torsion for e in page.entries.values()):
        return False
    return got == {k: v for k, v in ranks.items() if v}


def tor_koszul(A: GradedPolyAlgebra, trunc: int = DEFAULT_TRUNC) -> TorPage:
    """Tor^A(base, base) with the engine self-checks.

    Records whether the computed page equals the closed-form exterior algebra
    and whether the Koszul resolution A (x) E(ybar) is acyclic (Tor^A(A, base)
    is the base in filtration 0), then raises if either fails.
    """
    check_truncation(trunc)
    k = base_module(A)
    page = koszul_tor(A, k, k, trunc)
    page.exterior = True
    closed = _same_ranks(page, exterior_ranks(A, trunc))
    res = koszul_tor(A, free_module(A, trunc), k, trunc, labels=False)
    acyclic = (set(res.entries) == {(0, _zero(A.group))}
               and res.entries[(0, _zero(A.group))].rank == 1)
    page.checks = {"closed_form": closed, "resolution_acyclic": acyclic}
    if not (closed and acyclic):
        raise SpecSeqError(f"Koszul engine self-check failed: {page.checks}")
    return page


# ---------------------------------------------------------------------------
# brute-force oracle: normalized bar complex B(k, A, k)


def bar_complex_tor(A: GradedPolyAlgebra, trunc: int) -> dict:
    """(s, degree) -> (rank, torsion) from the normalized bar complex.

    B_n is spanned by [m_1|...|m_n] with m_i non-unit monomials; the
    differential multiplies neighbours with alternating signs.
    """
    mons = [m for m in A.monomials(trunc) if m]
    w = {m: sum(abs(A.degree(n).dim) * e for n, e in m) for m in mons}
    deg = {m: A.mono_degree(m) for m in mons}
    names = A.names()

    def mul(a, b):
        d = dict(a)
        for n, e in b:
            d[n] = d.get(n, 0) + e
        return tuple((n, d[n]) for n in names if d.get(n))

    layers = {0: [()]}
    n = 0
    while layers[n]:
        nxt = []
        for c in layers[n]:
            used = sum(w[m] for m in c)
            for m in mons:
                if used + w[m] <= trunc:
                    nxt.append(c + (m,))
        n += 1
        layers[n] = nxt
    groups: dict = {}
    for k, cs in layers.items():
        for c in cs:
            D = _zero(A.group)
            for m in c:
                D = _dadd(D, deg[m])
            groups.setdefault(D, {}).setdefault(k, []).append(c)
    mod = A.modulus
    out = {}
    for D, by_n in groups.items():
        idx = {k: {c: i for i, c in enumerate(v)} for k, v in by_n.items()}

        def dmat(k):
            src, tgt = by_n.get(k, []), idx.get(k - 1, {})
            M = [[0] * len(src) for _ in range(len(tgt))]
            for j, c in enumerate(src):
                for i in range(len(c) - 1):
                    t = c[:i] + (mul(c[i], c[i + 1]),) + c[i + 2:]
                    M[tgt[t]][j] += -1 if i % 2 == 0 else 1
            return [[v % mod for v in r] for r in M] if mod else M

        for k in sorted(by_n):
            rk, tors = homology_ranks(dmat(k), dmat(k + 1), len(by_n.get(k - 1, ())),
                                      len(by_n[k]), len(by_n.get(k + 1, ())), mod)
            if rk or tors:
                out[(-k, D)] = (rk, tuple(tors))
    return out


# ---------------------------------------------------------------------------
# the three pages


def bar_e2(A: GradedPolyAlgebra, X: GradedModule | None = None, Y: GradedModule | None = None,
           trunc: int = DEFAULT_TRUNC) -> TorPage:
    """E2 = Tor^{R(A)}(R(X), R(Y)) of the bar spectral sequence."""
    check_truncation(trunc)
    X = X or base_module(A)
    Y = Y or base_module(A)
    for M in (X, Y):
        if M.algebra != A:
            raise SpecSeqError("module is over a different algebra")
    page = koszul_tor(A, X, Y, trunc, kind="bar")
    page.exterior = X.name == "base" and Y.name == "base"
    return page


def twisted_bar_e2(model: PureRingModel, X: GradedModule | None = None,
                   trunc: int = DEFAULT_TRUNC) -> TorPage:
    """E2 of the twisted bar spectral sequence, reported at the underlying level.

    The normed ring N_e^{C2}(i_e^* R(A)) is underlying the polynomial ring on
    two copies n@0, n@1 of each generator n; the swap exchanges them.  R(A)
    is a module through n@0 -> n, n@1 -> sign(n) n.  The coinduced module
    Map(C2, X) is X (x) X with n@k acting on the k-th factor.
    """
    check_truncation(trunc)
    if model.group.order != 2:
        raise SpecSeqError("the twisted bar construction is over C2")
    if model._rules or model._schemas:
        raise SpecSeqError("the Koszul engine needs a polynomial (relation-free) model")
    C1 = cyclic(1)
    under = [(model.underlying_name(g.name), g) for g in model.generators(trunc)]
    U = GradedPolyAlgebra(C1, model.coeff, tuple((u, integer_degree(g.udeg)) for u, g in under))
    N = GradedPolyAlgebra(C1, model.coeff, tuple(
        (f"{u}@{k}", integer_degree(g.udeg)) for u, g in under for k in (0, 1)))
    signs = {u: g.sign for u, g in under}
    RA = module_via(N, U, {f"{u}@{k}": (u, 1 if k == 0 else signs[u]) for u, _ in under for k in (0, 1)},
                    trunc)
    if X is None:
        MX = base_module(N)
    else:
        if X.algebra != U:
            raise SpecSeqError("X must be a module over the underlying polynomial ring")
        MX = tensor_module(X, X, N, {f"{u}@0": u for u, _ in under},
                           {f"{u}@1": u for u, _ in under}, trunc)
    page = koszul_tor(N, MX, RA, trunc, kind="twisted")
    page.group = "e"
    return page


def cohomology_algebra(model: PureRingModel, trunc: int, prefix: str = "cbar") -> GradedPolyAlgebra:
    """The dual presentation: one generator in degree -deg(g) per model generator."""
    A = algebra_from_model(model, trunc)
    gens = []
    for name, d in A.gens:
        g = model.gen(name)
        new = f"{prefix}{g.index}" if g.index is not None else name + "'"
        gens.append((new, canonical(negate(d))))
    return GradedPolyAlgebra(A.group, A.coeff, tuple(gens))


def em_e2(B: GradedPolyAlgebra, X: GradedModule | None = None, Y: GradedModule | None = None,
          trunc: int = DEFAULT_TRUNC) -> TorPage:
    """E2 = Tor^{H^*(B)}(H^*(X), H^*(Y)) of the Eilenberg-Moore spectral sequence."""
    check_truncation(trunc)
    if any(d.dim > 0 for _, d in B.gens):
        raise SpecSeqError("em_e2 takes a cohomology presentation (negative degrees)")
    X = X or base_module(B)
    Y = Y or base_module(B)
    page = koszul_tor(B, X, Y, trunc, kind="em")
    page.exterior = X.name == "base" and Y.name == "base"
    return page


# ---------------------------------------------------------------------------
# collapse and multiplicative extensions


@dataclass
class RingPresentationOutput:
    group: str
    coeff: str
    truncation: int
    generators: list[tuple[str, Degree]]
    relations: list[tuple[str, str]]
    collapse: bool
    diagnostic: str = ""
    name: str = "BBU_R"

    def to_model(self) -> PureRingModel:
        G = _group_from_name(self.group)
        gens = [GenSpec(n, str(d.dim), _deg_text(d)) for n, d in self.generators]
        rels = [RuleSpec(l, r) for l, r in self.relations]
        return PureRingModel(self.name, G, self.coeff, (), gens, rels)

    def basis(self, max_udeg: int | None = None) -> Basis:
        md = self.to_model()
        return expand_basis(md, self.truncation + 1 if max_udeg is None else max_udeg)


def _group_from_name(name: str) -> CyclicGroup:
    from .groups import parse_group
    return parse_group(name)


def _deg_text(d: Degree) -> str:
    c = to_full_c2(d) if d.stab == 2 else None
    if c is None:
        if isinstance(d, RegDegree):
            return f"{d.k}*rho" + ("-1" if d.eps else "") if d.stab > 1 else str(d.k)
        raise DegreeError(f"cannot write {d}")
    # a + b*s = b*rho + (a - b)
    rest = c.a - c.b
    s = f"{c.b}*rho"
    if rest:
        s += f"{rest:+d}"
    return s


def _suspend(D: Degree) -> Degree:
    if D.stab != 2:
        raise SpecSeqError("collapse_and_extend is implemented over C2")
    c = to_full_c2(D)
    return canonical(DegreeC2(c.a + 1, c.b))


def total_degree_basis(page: TorPage, G: CyclicGroup) -> Basis:
    """E2 classes as cells in total degree (one extra underlying dimension
    per filtration step)."""
    cells = []
    for (s, D), e in page.sorted_items():
        total = D
        for _ in range(-s):
            total = _suspend(total)
        for i in range(e.rank):
            lab = e.labels[i] if i < len(e.labels) else f"c{s}_{D}_{i}"
            cells.append(Cell(lab, G.order, total))
    return Basis(G, tuple(cells), page.coeff)


def collapse_and_extend(page: TorPage, model: PureRingModel) -> RingPresentationOutput:
    """Certify collapse by generalized isotropy, then resolve the squares of
    the odd generators with the Dyer-Lashof table: ybar_n^2 = a_s * ybar_{2n+1}."""
    G = model.group
    if G.order != 2:
        raise SpecSeqError("collapse_and_extend is implemented over C2")
    if any(e.torsion for e in page.entries.values()):
        raise SpecSeqError("E2 has torsion; generators are not free")
    if not page.entries:
        return RingPresentationOutput(str(G), page.coeff, page.truncation, [], [], True)
    gens = []
    for (s, D), e in page.sorted_items():
        if s == -1:
            r = canonical(D)
            if not (isinstance(r, RegDegree) and r.eps == 0):
                raise SpecSeqError(f"generator in non-regular degree {D}")
            for lab in e.labels:
                gens.append((lab, _suspend(r)))
    cells = total_degree_basis(page, G)
    if not generalized_isotropic(cells):
        w = isotropic_witness(cells)
        return RingPresentationOutput(str(G), page.coeff, page.truncation, gens, [], False,
                                      f"collapse not certified: cells {w[0].label} and {w[1].label}")
    F2 = model.mod2()
    by_index = {}
    for lab, _ in gens:
        if lab.startswith("ybar") and lab[4:].isdigit():
            by_index[int(lab[4:])] = lab
    relations = []
    for n, lab in sorted(by_index.items()):
        g = _model_gen_for(F2, n)
        try:
            q = dyer_lashof(n + 1, 0, F2.gen_element(g.name))
        except DLError as exc:
            raise SpecSeqError(f"no extension data for {lab}: {exc}") from None
        targets = []
        for (pc, m), c in q.value.poly.terms.items():
            (tname, _), = m
            tg = F2.gen(tname)
            tl = by_index.get(tg.index)
            if tl is None:
                targets = None
                break
            targets.append(tl)
        if targets is None:
            continue  # the square leaves the truncation
        rhs = " + ".join(f"a_s*{t}" for t in sorted(targets, key=lambda t: int(t[4:]))) or "0"
        relations.append((f"{lab}**2", rhs))
    return RingPresentationOutput(str(G), page.coeff, page.truncation, gens, relations, True)


def _model_gen_for(model: PureRingModel, index: int):
    for f in model.families.values():
        return model.gen(f"{f.name}{index}")
    for n in model._named:
        g = model.gen(n)
        if n.endswith(str(index)):
            return g
    raise SpecSeqError(f"no model generator with index {index}")


def bbur_presentation(model: PureRingModel, trunc: int = DEFAULT_TRUNC) -> tuple[TorPage, RingPresentationOutput]:
    """Bar E2 of BU_R against the point, then collapse and extension."""
    A = algebra_from_model(model, trunc)
    page = bar_e2(A, trunc=trunc)
    return page, collapse_and_extend(page, model)


def coinduce_result(pres: RingPresentationOutput, G: CyclicGroup, trunc: int) -> Basis:
    """N_{C2}^G of the presentation's basis up to an underlying degree."""
    if G.order % 2 or G.prime != 2:
        raise GroupError(f"{G} does not contain C2 as a 2-group")
    if G.order // 2 > MAX_COINDUCE_INDEX:
        raise GroupError(f"index [{G}:C2] exceeds the resource guard ({MAX_COINDUCE_INDEX})")
    check_truncation(trunc)
    B = pres.basis(trunc)
    if G.order == 2:
        return B
    return norm_basis(2, G, B, trunc)
