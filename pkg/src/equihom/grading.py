"""Virtual representation degrees.

Three kinds of degree appear:

``RegDegree(stab, k, eps)``
    k * rho_H - eps for the subgroup H of order ``stab`` (eps in {0, 1}).
    Over the trivial group rho_e = 1, so these are normalized to eps = 0 and
    behave as plain integers.
``DegreeC2(a, b)``
    a + b*sigma in RO(C2).
``InducedDegree(stab, sub, inner)``
    Ind_{sub}^{stab} of an RO(sub) degree that is not regular; produced when
    norming non-regular cells up a chain of cyclic 2-groups.  Kept symbolic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class RegDegree:
    stab: int
    k: int
    eps: int = 0

    def __post_init__(self):
        if self.eps not in (0, 1):
            raise DegreeError(f"eps must be 0 or 1, got {self.eps}")
        if self.stab < 1:
            raise DegreeError("stabilizer order must be positive")
        if self.stab == 1 and self.eps:
            object.__setattr__(self, "k", self.k - self.eps)
            object.__setattr__(self, "eps", 0)

    @property
    def dim(self) -> int:
        return self.k * self.stab - self.eps

    @property
    def is_regular(self) -> bool:
        return self.eps == 0

    def __add__(self, other):
        return add_degrees(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        return add_degrees(self, negate(other))

    def __str__(self):
        if self.stab == 1:
            return str(self.k)
        s = f"{self.k}*rho[{self.stab}]"
        return s + ("-1" if self.eps else "")


@dataclass(frozen=True)
class DegreeC2:
    a: int
    b: int

    @property
    def dim(self) -> int:
        return self.a + self.b

    @property
    def fixed_dim(self) -> int:
        return self.a

    @property
    def stab(self) -> int:
        return 2

    def __add__(self, other):
        return add_degrees(self, other)

    def __neg__(self):
        return DegreeC2(-self.a, -self.b)

    def __sub__(self, other):
        return add_degrees(self, negate(other))

    def __str__(self):
        return f"{self.a}{self.b:+d}*s"


@dataclass(frozen=True)
class InducedDegree:
    stab: int
    sub: int
    inner: "Degree"

    @property
    def dim(self) -> int:
        return (self.stab // self.sub) * self.inner.dim

    def __add__(self, other):
        return add_degrees(self, other)

    def __neg__(self):
        return InducedDegree(self.stab, self.sub, negate(self.inner))

    def __str__(self):
        return f"Ind[{self.sub}->{self.stab}]({self.inner})"


Degree = Union[RegDegree, DegreeC2, InducedDegree]


def integer_degree(n: int) -> RegDegree:
    return RegDegree(1, n, 0)


def stab_of(D: Degree) -> int:
    return D.stab


def res_degree(D: Degree, K: int) -> Degree:
    """Restrict a degree to the subgroup of order K.

    k rho_H restricts to k[H:K] rho_K; to the trivial group everything becomes
    its underlying dimension.
    """
    H = D.stab
    if K < 1 or H % K:
        raise DegreeError(f"subgroup of order {K} is not contained in one of order {H}")
    if K == H:
        return D
    if K == 1:
        return integer_degree(D.dim)
    if isinstance(D, RegDegree):
        return RegDegree(K, D.k * (H // K), D.eps)
    if isinstance(D, DegreeC2):
        raise DegreeError("unreachable: DegreeC2 lives on C2")
    # Ind_L^S W restricted to K: [S:K] copies of Ind_L^K W if L <= K,
    # else [S:L] copies of res_K W (cyclic double cosets)
    S, L, W = D.stab, D.sub, D.inner
    if K >= L and K % L == 0:
        part = _induce(W, L, K)
        copies = S // K
    else:
        part = res_degree(W, K)
        copies = S // L
    total = part
    for _ in range(copies - 1):
        total = add_degrees(total, part)
    return total


def _induce(W: Degree, L: int, S: int) -> Degree:
    if S == L:
        return W
    if isinstance(W, RegDegree) and W.eps == 0:
        return RegDegree(S, W.k, 0)
    return InducedDegree(S, L, W)


def induce_degree(W: Degree, S: int) -> Degree:
    """Ind_{stab W}^{S} W, reduced to a regular degree when possible."""
    L = W.stab
    if S % L:
        raise DegreeError(f"cannot induce from order {L} to order {S}")
    return _induce(W, L, S)


def to_full_c2(D: Degree) -> DegreeC2:
    """k rho_2 - eps  ->  (k - eps) + k sigma."""
    if isinstance(D, DegreeC2):
        return D
    if not isinstance(D, RegDegree) or D.stab != 2:
        raise DegreeError(f"{D} is not a degree over C2")
    return DegreeC2(D.k - D.eps, D.k)


def add_degrees(x: Degree, y: Degree) -> Degree:
    if x.stab != y.stab:
        raise DegreeError(f"cannot add degrees over different subgroups: {x}, {y}")
    if isinstance(x, RegDegree) and isinstance(y, RegDegree):
        if x.stab == 1:
            return integer_degree(x.k + y.k)
        if x.eps + y.eps <= 1:
            return RegDegree(x.stab, x.k + y.k, x.eps + y.eps)
        if x.stab == 2:
            return to_full_c2(x) + to_full_c2(y)
        raise DegreeError(f"{x} + {y} is not a regular degree")
    if isinstance(x, InducedDegree) or isinstance(y, InducedDegree):
        if (isinstance(x, InducedDegree) and isinstance(y, InducedDegree)
                and x.sub == y.sub):
            return induce_degree(add_degrees(x.inner, y.inner), x.stab)
        xi, yi = _as_induced(x), _as_induced(y)
        if xi is not None and yi is not None and xi.sub == yi.sub:
            return induce_degree(add_degrees(xi.inner, yi.inner), x.stab)
        raise DegreeError(f"cannot add {x} and {y}")
    if x.stab != 2:
        raise DegreeError(f"cannot add {x} and {y}")
    cx, cy = to_full_c2(x), to_full_c2(y)
    return DegreeC2(cx.a + cy.a, cx.b + cy.b)


def _as_induced(D: Degree):
    if isinstance(D, InducedDegree):
        return D
    if isinstance(D, RegDegree) and D.eps == 0 and D.stab > 2:
        # k rho_S = Ind_2^S (k rho_2), used when summing with Ind_2^S(...)
        return InducedDegree(D.stab, 2, RegDegree(2, D.k, 0))
    return None


def negate(D: Degree) -> Degree:
    if isinstance(D, RegDegree):
        if D.eps == 0:
            return RegDegree(D.stab, -D.k, 0)
        if D.stab == 2:
            return -to_full_c2(D)
        raise DegreeError(f"-({D}) is not a regular degree")
    return -D


def is_regular(D: Degree) -> bool:
    return isinstance(D, RegDegree) and D.eps == 0


def as_regular(D: Degree) -> RegDegree | None:
    """The regular form of D if it has one (e.g. (k, k) in RO(C2) is k rho_2)."""
    if isinstance(D, RegDegree):
        return D
    if isinstance(D, DegreeC2):
        if D.a == D.b:
            return RegDegree(2, D.a, 0)
        if D.a == D.b - 1:
            return RegDegree(2, D.b, 1)
    return None


def same_degree(x: Degree, y: Degree) -> bool:
    """Equality up to the RegDegree/DegreeC2 change of notation."""
    if x == y:
        return True
    if x.stab == y.stab == 2:
        try:
            return to_full_c2(x) == to_full_c2(y)
        except DegreeError:
            return False
    return False


def canonical(D: Degree) -> Degree:
    """Prefer the regular notation when a C2 degree is regular."""
    r = as_regular(D)
    return r if r is not None else D


def sort_key(D: Degree):
    return (D.dim, D.stab, str(D))


# ---------------------------------------------------------------------------
# text forms:  "a+b*s", "k*rho[H]-e", plain integers

_REG_RE = re.compile(r"^\s*(-?\d*)\s*\*?\s*rho\s*\[\s*(\d+)\s*\]\s*(?:-\s*([01]))?\s*$")
_C2_RE = re.compile(r"^\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*s\s*$")
_IND_RE = re.compile(r"^\s*Ind\[(\d+)->(\d+)\]\((.*)\)\s*$")


def parse_degree(text: str) -> Degree:
    t = text.strip()
    m = _IND_RE.match(t)
    if m:
        return InducedDegree(int(m.group(2)), int(m.group(1)), parse_degree(m.group(3)))
    m = _REG_RE.match(t)
    if m:
        k = {"": 1, "-": -1}.get(m.group(1))
        return RegDegree(int(m.group(2)), int(m.group(1)) if k is None else k, int(m.group(3) or 0))
    m = _C2_RE.match(t)
    if m:
        b = int(m.group(3)) * (1 if m.group(2) == "+" else -1)
        return DegreeC2(int(m.group(1)), b)
    if re.fullmatch(r"-?\d+", t):
        return integer_degree(int(t))
    raise DegreeError(f"cannot parse degree {text!r}")


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def pretty(D: Degree) -> str:
    """Rendering with rho/sigma symbols for text output."""
    if isinstance(D, RegDegree):
        if D.stab == 1:
            return str(D.k)
        core = "0" if D.k == 0 else f"{_coef(D.k)}ρ{str(D.stab).translate(_SUB)}"
        return core + ("-1" if D.eps else "")
    if isinstance(D, DegreeC2):
        a, b = D.a, D.b
        if b > 0 and a >= b:
            rest = a - b
            return f"{_coef(b)}ρ₂" + (f"+{rest}" if rest else "")
        if b == 0:
            return str(a)
        sig = f"{_coef(b)}σ"
        return sig if a == 0 else f"{a}{'+' if b > 0 else ''}{sig}"
    return f"Ind({pretty(D.inner)})"


def _coef(k: int) -> str:
    return {1: "", -1: "-"}.get(k, str(k))
