"""Cyclic p-groups, finite G-sets and their orbit combinatorics.

A cyclic group C_{p^n} is modelled as Z/p^n.  Subgroups are identified by
their order (the lattice is a chain), so throughout the package a subgroup is
just an ``int``.  A finite G-set is a multiset of orbits G/H keyed by the
stabilizer order.

Two layers live here:

* closed-form orbit arithmetic (:func:`orbit_product`, :func:`restrict_gset`,
  :func:`induce_gset`), which is what the rest of the package calls, and
* a concrete layer (:class:`ConcreteGSet`) that lists points and the action
  explicitly.  Coinduction is computed in the concrete layer, and the same
  layer serves as the brute-force check for the closed forms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Callable, Hashable, Iterable, Mapping, Sequence

MAX_COINDUCE_INDEX = 8
MAX_COINDUCE_POINTS = 2_000_000


class GroupError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True, order=True)
class CyclicGroup:
    prime: int
    exponent: int

    def __post_init__(self):
        if not _is_prime(self.prime):
            raise GroupError(f"{self.prime} is not prime")
        if self.exponent < 0:
            raise GroupError("exponent must be non-negative")

    @property
    def order(self) -> int:
        return self.prime**self.exponent

    def __str__(self):
        return f"C{self.order}" if self.order > 1 else "C1"

    def subgroup(self, order: int) -> "CyclicGroup":
        """The subgroup of the given order, as a group in its own right."""
        check_subgroup(self, order)
        e = 0
        while self.prime**e < order:
            e += 1
        return CyclicGroup(self.prime, e)

    def index(self, order: int) -> int:
        check_subgroup(self, order)
        return self.order // order


def cyclic(order: int, prime: int | None = None) -> CyclicGroup:
    """``cyclic(4)`` -> C4.  The prime is inferred unless ``order == 1``."""
    if order == 1:
        return CyclicGroup(prime or 2, 0)
    p = prime or next(d for d in range(2, order + 1) if order % d == 0)
    e, n = 0, order
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise GroupError(f"{order} is not a prime power")
    return CyclicGroup(p, e)


def parse_group(text: str) -> CyclicGroup:
    t = text.strip().lower()
    if t.startswith("c"):
        t = t[1:]
    try:
        return cyclic(int(t))
    except ValueError as exc:
        raise GroupError(f"cannot parse group {text!r}") from exc


def subgroups(G: CyclicGroup) -> list[int]:
    """Orders of all subgroups of G, ascending."""
    return [G.prime**k for k in range(G.exponent + 1)]


def check_subgroup(G: CyclicGroup, order: int) -> None:
    if order < 1 or G.order % order:
        raise GroupError(f"{order} is not the order of a subgroup of {G}")


def subgroup_name(order: int) -> str:
    return "e" if order == 1 else f"C{order}"


def parse_subgroup(text: str) -> int:
    t = text.strip()
    if t in ("e", "1", "C1"):
        return 1
    if t[:1] in "cC":
        t = t[1:]
    return int(t)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# G-sets as orbit multisets


@dataclass(frozen=True)
class GSet:
    """A finite G-set, stored as ``((stabilizer order, multiplicity), ...)``.

    Orbits are kept merged and sorted by stabilizer order; zero multiplicities
    are dropped, so equal G-sets compare equal.
    """

    group: CyclicGroup
    orbits: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        counts: dict[int, int] = {}
        for stab, mult in self.orbits:
            check_subgroup(self.group, stab)
            if mult < 0:
                raise GroupError("negative multiplicity")
            counts[stab] = counts.get(stab, 0) + mult
        canon = tuple(sorted((s, m) for s, m in counts.items() if m))
        object.__setattr__(self, "orbits", canon)

    @classmethod
    def orbit(cls, G: CyclicGroup, stab: int, mult: int = 1) -> "GSet":
        return cls(G, ((stab, mult),))

    @classmethod
    def from_counts(cls, G: CyclicGroup, counts: Mapping[int, int]) -> "GSet":
        return cls(G, tuple(counts.items()))

    @property
    def cardinality(self) -> int:
        return sum(m * (self.group.order // s) for s, m in self.orbits)

    @property
    def num_orbits(self) -> int:
        return sum(m for _, m in self.orbits)

    def multiplicity(self, stab: int) -> int:
        return dict(self.orbits).get(stab, 0)

    def __add__(self, other: "GSet") -> "GSet":
        _same_group(self.group, other.group)
        return GSet(self.group, self.orbits + other.orbits)

    def __mul__(self, other: "GSet") -> "GSet":
        return product_gset(self, other)

    def __str__(self):
        if not self.orbits:
            return "0"
        return " + ".join(
            f"{m} x {self.group}/{subgroup_name(s)}" for s, m in self.orbits
        )


def _same_group(G: CyclicGroup, H: CyclicGroup) -> None:
    if G != H:
        raise GroupError(f"G-sets over different groups: {G} vs {H}")


def orbit_product(G: CyclicGroup, H: int, K: int) -> GSet:
    """G/H x G/K as a G-set.

    For cyclic groups conjugation is trivial, so every double coset
    contributes a copy of G/(H n K) and there are |G|/lcm(|H|,|K|) of them.
    """
    check_subgroup(G, H)
    check_subgroup(G, K)
    return GSet.orbit(G, gcd(H, K), G.order // lcm(H, K))


def product_gset(A: GSet, B: GSet) -> GSet:
    _same_group(A.group, B.group)
    counts: dict[int, int] = {}
    for h, m in A.orbits:
        for k, n in B.orbits:
            p = orbit_product(A.group, h, k)
            for s, c in p.orbits:
                counts[s] = counts.get(s, 0) + m * n * c
    return GSet.from_counts(A.group, counts)


def restrict_gset(G: CyclicGroup, K: int, T: GSet) -> GSet:
    """Restriction of T to the subgroup of order K (a G-set over that group)."""
    _same_group(G, T.group)
    GK = G.subgroup(K)
    counts: dict[int, int] = {}
    for J, m in T.orbits:
        s = gcd(J, K)
        counts[s] = counts.get(s, 0) + m * (G.order // lcm(J, K))
    return GSet.from_counts(GK, counts)


def induce_gset(G: CyclicGroup, H: int, T: GSet) -> GSet:
    """G x_H T: each H-orbit H/L becomes G/L."""
    GH = G.subgroup(H)
    _same_group(GH, T.group)
    return GSet(G, T.orbits)


def coinduce(G: CyclicGroup, H: int, T: GSet) -> GSet:
    """Map^H(G, T) as a G-set, by explicit enumeration of the maps."""
    GH = G.subgroup(H)
    _same_group(GH, T.group)
    return coinduce_concrete(G, H, realize(T)).decompose()


# ---------------------------------------------------------------------------
# concrete G-sets


class ConcreteGSet:
    """A G-set given by an explicit list of points and an action.

    ``act(g, x)`` is the action of ``g`` in Z/|G| on the point ``x``.  Points
    must be hashable.
    """

    def __init__(self, group: CyclicGroup, points: Sequence[Hashable],
                 act: Callable[[int, Hashable], Hashable]):
        self.group = group
        self.points = list(points)
        self.act = act

    def __len__(self):
        return len(self.points)

    def orbits(self) -> list[tuple[int, Hashable, list[Hashable]]]:
        """``(stabilizer order, representative, members)`` for each orbit.

        Representatives are the first point of each orbit in list order.
        """
        N = self.group.order
        seen: set = set()
        out = []
        for x in self.points:
            if x in seen:
                continue
            members = []
            y = x
            while True:
                members.append(y)
                seen.add(y)
                y = self.act(1, y)
                if y == x:
                    break
            out.append((N // len(members), x, members))
        return out

    def decompose(self) -> GSet:
        counts: dict[int, int] = {}
        for stab, _, _ in self.orbits():
            counts[stab] = counts.get(stab, 0) + 1
        return GSet.from_counts(self.group, counts)

    def stabilizer(self, x) -> int:
        N = self.group.order
        for d in subgroups(self.group):
            if self.act(N // d, x) == x:
                stab = d
        return stab


def coset_space(G: CyclicGroup, H: int) -> ConcreteGSet:
    """G/H realized as Z/[G:H] with translation action."""
    m = G.index(H)
    return ConcreteGSet(G, list(range(m)), lambda g, x: (x + g) % m)


def realize(T: GSet) -> ConcreteGSet:
    """Concrete model of T: points ``(orbit number, coset)``."""
    G = T.group
    sizes = []
    for stab, mult in T.orbits:
        sizes.extend([G.order // stab] * mult)
    points = [(i, x) for i, m in enumerate(sizes) for x in range(m)]
    return ConcreteGSet(G, points, lambda g, p: (p[0], (p[1] + g) % sizes[p[0]]))


def labelled_gset(G: CyclicGroup, items: Iterable[tuple[Hashable, int]]) -> ConcreteGSet:
    """Concrete G-set with one orbit G/stab per ``(label, stab)``.

    Points are ``(label, coset)``.
    """
    index = {}
    points = []
    for label, stab in items:
        check_subgroup(G, stab)
        m = G.order // stab
        index[label] = m
        points.extend((label, x) for x in range(m))
    return ConcreteGSet(G, points, lambda g, p: (p[0], (p[1] + g) % index[p[0]]))


def concrete_product(A: ConcreteGSet, B: ConcreteGSet) -> ConcreteGSet:
    _same_group(A.group, B.group)
    pts = list(itertools.product(A.points, B.points))
    return ConcreteGSet(A.group, pts, lambda g, p: (A.act(g, p[0]), B.act(g, p[1])))


def concrete_restrict(A: ConcreteGSet, K: int) -> ConcreteGSet:
    G = A.group
    step = G.index(K)
    return ConcreteGSet(G.subgroup(K), A.points, lambda t, x: A.act(t * step, x))


def coinduce_concrete(G: CyclicGroup, H: int, T: ConcreteGSet) -> ConcreteGSet:
    """Map^H(G, T) for a concrete H-set T.

    An H-map f: G -> T is determined by its values on the coset
    representatives 0..m-1 of H in Z/|G| (m = [G:H]), so points are m-tuples
    of points of T.  For r + g = h + r' with 0 <= r' < m and h in H,
    (g.f)(r) = f(r + g) = h.f(r').
    """
    GH = G.subgroup(H)
    _same_group(GH, T.group)
    m = G.index(H)
    if m > MAX_COINDUCE_INDEX:
        raise GroupError(f"index [G:H] = {m} exceeds the limit {MAX_COINDUCE_INDEX}")
    if len(T) ** m > MAX_COINDUCE_POINTS:
        raise GroupError(
            f"coinduction would enumerate {len(T)}^{m} maps; limit is {MAX_COINDUCE_POINTS}"
        )
    N = G.order

    def act(g, f):
        out = []
        for r in range(m):
            s = (r + g) % N
            out.append(T.act(s // m, f[s % m]))
        return tuple(out)

    pts = list(itertools.product(T.points, repeat=m))
    return ConcreteGSet(G, pts, act)


def concrete_induce(G: CyclicGroup, H: int, T: ConcreteGSet) -> ConcreteGSet:
    """G x_H T with points ``(r, t)``, r a coset representative of H."""
    GH = G.subgroup(H)
    _same_group(GH, T.group)
    m = G.index(H)
    N = G.order

    def act(g, p):
        s = (p[0] + g) % N
        return (s % m, T.act(s // m, p[1]))

    return ConcreteGSet(G, [(r, t) for r in range(m) for t in T.points], act)
