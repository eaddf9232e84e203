"""Ring models for homologically pure spectra.

A :class:`PureRingModel` is an underlying graded ring (generators, Weyl
signs, monomial rewrite rules) together with an equivariant degree for every
generator.  Each normal monomial is a cell of a free basis whose degree is
the sum of the generator degrees.  Because restriction to the underlying
level is injective on regular cells, products, norms and Dyer-Lashof
operations are computed underlying and lifted back.

Generators come either one at a time or as indexed families
(``abar[i] for i >= 1``) that are instantiated lazily, so a model can be
expanded to any truncation.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable

from .coefficients import ONE, PointClass, PointRingC2, UnsupportedConeError
from .expr import ExprError, compile_expr, evaluate, free_names
from .freebasis import Basis, Cell, geometric_fixed_basis
from .grading import (
    Degree,
    DegreeC2,
    DegreeError,
    RegDegree,
    add_degrees,
    as_regular,
    canonical,
    integer_degree,
    same_degree,
)
from .groups import CyclicGroup, cyclic

Monomial = tuple  # ((generator name, exponent), ...) sorted by generator key


class ModelError(ValueError):
    """Invalid model data.  ``line``/``col`` locate the offending input."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        loc = f"line {line}, col {col + 1}: " if line else ""
        super().__init__(loc + msg)
        self.msg, self.line, self.col = msg, line, col


class LiftError(ValueError):
    """An underlying element is not the restriction of a full-level one."""

    def __init__(self, msg: str, value=None):
        super().__init__(msg)
        self.value = value


class DLError(ValueError):
    pass


# ---------------------------------------------------------------------------
# degree expressions: integers, rho and s (sigma)


@dataclass(frozen=True)
class DegExpr:
    const: int = 0
    rho: int = 0
    sigma: int = 0

    def _lift(self, o):
        if isinstance(o, DegExpr):
            return o
        if isinstance(o, int):
            return DegExpr(o)
        return NotImplemented

    def __add__(self, o):
        o = self._lift(o)
        return DegExpr(self.const + o.const, self.rho + o.rho, self.sigma + o.sigma)

    __radd__ = __add__

    def __neg__(self):
        return DegExpr(-self.const, -self.rho, -self.sigma)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return DegExpr(self.const * k, self.rho * k, self.sigma * k)

    __rmul__ = __mul__


_DEG_ENV = {"rho": DegExpr(0, 1, 0), "s": DegExpr(0, 0, 1), "sigma": DegExpr(0, 0, 1)}


def degexpr_to_degree(D, G: CyclicGroup) -> Degree:
    if isinstance(D, int):
        D = DegExpr(D)
    N = G.order
    if N == 1:
        if D.sigma:
            raise DegreeError("sigma has no meaning over the trivial group")
        return integer_degree(D.const + D.rho)
    if N == 2:
        return canonical(DegreeC2(D.const + D.rho, D.sigma + D.rho))
    if D.sigma or D.const not in (0, -1):
        raise DegreeError(f"over {G} only degrees k*rho or k*rho-1 are supported")
    return RegDegree(N, D.rho, -D.const)


# ---------------------------------------------------------------------------
# model specification records


@dataclass
class FamilySpec:
    name: str
    var: str
    start: int
    udeg: str
    deg: str
    sign: str = "1"
    zero_unit: bool = False
    line: int = 0


@dataclass
class GenSpec:
    name: str
    udeg: str
    deg: str
    sign: str = "1"
    line: int = 0


@dataclass
class RuleSpec:
    lhs: str
    rhs: str
    line: int = 0


@dataclass
class TableSpec:
    """A DL row (``opvar`` set) or a coproduct row (``opvar`` empty)."""

    target: str
    rhs: str
    opvar: str = ""
    line: int = 0


@dataclass(frozen=True)
class Gen:
    name: str
    udeg: int
    degree: Degree
    sign: int
    key: tuple
    family: str | None = None
    index: int | None = None


# ---------------------------------------------------------------------------
# polynomials with point-ring coefficients, and tensors


class EPoly:
    """Sum of c * pc * m with pc a positive-cone point class, m a monomial."""

    __slots__ = ("model", "terms")

    def __init__(self, model: "PureRingModel", terms=None):
        self.model = model
        self.terms: dict = {}
        for k, v in (terms or {}).items():
            v = model.reduce_coeff(k[0], v)
            if v:
                self.terms[k] = v

    @classmethod
    def monomial(cls, model, m: Monomial, pc: PointClass = ONE, c: int = 1):
        return cls(model, {(pc, m): c})

    def _coerce(self, o):
        if isinstance(o, EPoly):
            return o
        if isinstance(o, bool):
            raise ExprError("booleans are not ring elements")
        if isinstance(o, int):
            return EPoly(self.model, {(ONE, ()): o})
        if isinstance(o, PointClass):
            return EPoly(self.model, {(o, ()): 1})
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return EPoly(self.model, t)

    __radd__ = __add__

    def __neg__(self):
        return EPoly(self.model, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        o = self._coerce(o)
        return self + (-o)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        t: dict = {}
        mul = self.model.mono_mul
        for (p1, m1), c1 in self.terms.items():
            for (p2, m2), c2 in o.terms.items():
                k = (p1 * p2, mul(m1, m2))
                t[k] = t.get(k, 0) + c1 * c2
        return EPoly(self.model, t)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ExprError("exponents must be non-negative integers")
        out = EPoly(self.model, {(ONE, ()): 1})
        for _ in range(e):
            out = out * self
        return out

    def __matmul__(self, o):
        return Tensor.of(self) * Tensor.of(self._coerce(o))

    def __rmatmul__(self, o):
        return Tensor.of(self._coerce(o)) * Tensor.of(self)

    def __eq__(self, o):
        o = self._coerce(o)
        return isinstance(o, EPoly) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms


class Tensor:
    """Sum of c * (m1 (x) m2) with coefficients in the base ring."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None):
        self.model = model
        mod = 2 if model.coeff == "F2" else None
        self.terms = {}
        for k, v in (terms or {}).items():
            v = v % mod if mod else v
            if v:
                self.terms[k] = v

    @classmethod
    def of(cls, p):
        if isinstance(p, Tensor):
            return p
        if isinstance(p, int):
            raise ExprError("use 1 @ x to form tensors with the unit")
        t = {}
        for (pc, m), c in p.terms.items():
            if not pc.is_unit:
                raise ExprError("tensor factors must have trivial point coefficients")
            t[(m,)] = t.get((m,), 0) + c
        return _Partial(p.model, t)

    def __add__(self, o):
        if isinstance(o, int) and o == 0:
            return self
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return Tensor(self.model, t)

    __radd__ = __add__

    def __neg__(self):
        return Tensor(self.model, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return Tensor(self.model, {k: v * o for k, v in self.terms.items()})
        if not isinstance(o, Tensor):
            return NotImplemented
        t: dict = {}
        md = self.model
        for (a, b), c1 in self.terms.items():
            for (x, y), c2 in o.terms.items():
                sign = -1 if (md.mono_udeg(b) * md.mono_udeg(x)) % 2 else 1
                k = (md.mono_mul(a, x), md.mono_mul(b, y))
                t[k] = t.get(k, 0) + sign * c1 * c2
        return Tensor(md, t)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Tensor) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return self.render()

    def render(self, level: str = "G") -> str:
        md = self.model
        items = sorted(self.terms.items(),
                       key=lambda kv: (-md.mono_udeg(kv[0][0]), md.mono_sort(kv[0][0]),
                                       md.mono_sort(kv[0][1])))
        parts = []
        for (a, b), c in items:
            body = f"{md.mono_label(a, level)}@{md.mono_label(b, level)}"
            parts.append(_signed(c, body))
        return _join_terms(parts)


class _Partial(Tensor):
    """One tensor factor waiting for ``@`` to pair it with another."""

    def __mul__(self, o):
        if isinstance(o, _Partial):
            t = {}
            for (a,), c1 in self.terms.items():
                for (b,), c2 in o.terms.items():
                    t[(a, b)] = t.get((a, b), 0) + c1 * c2
            return Tensor(self.model, t)
        return super().__mul__(o)


def _signed(c: int, body: str) -> str:
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


# ---------------------------------------------------------------------------
# families as subscriptable expression values


class _FamilyRef:
    def __init__(self, model, spec: FamilySpec):
        self.model, self.spec = model, spec

    def __getitem__(self, i):
        if not isinstance(i, int):
            raise ExprError("family index must be an integer")
        if i == 0 and self.spec.zero_unit:
            return EPoly(self.model, {(ONE, ()): 1})
        if i < self.spec.start:
            return EPoly(self.model, {})
        g = self.model.gen(f"{self.spec.name}{i}")
        return EPoly.monomial(self.model, ((g.name, 1),))


@dataclass
class _Rule:
    lhs: Monomial
    rhs: EPoly


# ---------------------------------------------------------------------------
# the model


class PureRingModel:
    def __init__(self, name: str, group: CyclicGroup, coeff: str = "Z",
                 families: Iterable[FamilySpec] = (), gens: Iterable[GenSpec] = (),
                 relations: Iterable[RuleSpec] = (), dl: Iterable[TableSpec] = (),
                 coproduct: Iterable[TableSpec] = ()):
        self.name = name
        self.group = group
        if coeff not in ("Z", "F2"):
            raise ModelError(f"coefficients must be Z or F2, got {coeff!r}")
        self.coeff = coeff
        self.families = {f.name: f for f in families}
        self._family_order = {f.name: i for i, f in enumerate(families)}
        self._lock = threading.RLock()
        self._gens: dict[str, Gen] = {}
        self._named: list[str] = []
        self._nf_cache: dict = {}
        self.point_ring = PointRingC2(coeff.lower()) if group.order == 2 else None
        self._compiled: dict[int, tuple] = {}
        nfam = len(self.families)
        for f in self.families.values():
            self._check_family(f)
        for pos, g in enumerate(gens):
            self._add_named(g, nfam + pos)
        self._rule_specs = list(relations)
        self._rules: list[_Rule] = []
        self._schemas: list[tuple] = []
        for r in self._rule_specs:
            self._add_rule(r)
        self._dl_specs = list(dl)
        self._cop_specs = list(coproduct)
        self._dl = [self._table(t, "dl") for t in self._dl_specs]
        self._cop = [self._table(t, "coproduct") for t in self._cop_specs]
        # smoke-instantiate tables so errors surface at load time
        for fam in self.families.values():
            for i in range(fam.start, fam.start + 3):
                self.gen(f"{fam.name}{i}")

    # -- construction ----------------------------------------------------

    def _eval_int(self, text: str, env: dict, line: int, what: str) -> int:
        try:
            v = evaluate(compile_expr(text), env)
        except ExprError as exc:
            raise ModelError(f"{what}: {exc}", line, exc.col) from None
        if not isinstance(v, int) or isinstance(v, bool):
            raise ModelError(f"{what} must be an integer", line)
        return v

    def _make_gen(self, name, udeg_t, deg_t, sign_t, env, line, key, family=None, index=None):
        udeg = self._eval_int(udeg_t, env, line, f"udeg of {name}")
        sign = self._eval_int(sign_t, env, line, f"sign of {name}")
        try:
            D = evaluate(compile_expr(deg_t), {**_DEG_ENV, **env})
            deg = degexpr_to_degree(D, self.group)
        except ExprError as exc:
            raise ModelError(f"deg of {name}: {exc}", line, exc.col) from None
        except DegreeError as exc:
            raise ModelError(f"deg of {name}: {exc}", line) from None
        if udeg < 1:
            raise ModelError(f"generator {name} must have positive underlying degree", line)
        if deg.dim != udeg:
            raise ModelError(f"dimension mismatch for {name}: degree {deg} has underlying "
                             f"dimension {deg.dim}, udeg is {udeg}", line)
        if sign not in (1, -1):
            raise ModelError(f"Weyl sign of {name} must be 1 or -1", line)
        return Gen(name, udeg, deg, sign, key, family, index)

    def _check_family(self, f: FamilySpec):
        if not re.fullmatch(r"[A-Za-z_]\w*", f.name) or f.name[-1].isdigit():
            raise ModelError(f"bad family name {f.name!r}", f.line)
        prev = None
        for i in range(f.start, f.start + 6):
            g = self._family_gen(f, i)
            if prev is not None and g.udeg <= prev:
                raise ModelError(f"family {f.name} must have strictly increasing degrees", f.line)
            prev = g.udeg

    def _family_gen(self, f: FamilySpec, i: int) -> Gen:
        return self._make_gen(f"{f.name}{i}", f.udeg, f.deg, f.sign, {f.var: i}, f.line,
                              (self._family_order[f.name], i), f.name, i)

    def _add_named(self, g: GenSpec, pos: int):
        if g.name in self._gens or self._family_of(g.name):
            raise ModelError(f"duplicate generator {g.name!r}", g.line)
        if not re.fullmatch(r"[A-Za-z_]\w*", g.name):
            raise ModelError(f"bad generator name {g.name!r}", g.line)
        self._gens[g.name] = self._make_gen(g.name, g.udeg, g.deg, g.sign, {}, g.line, (pos, 0))
        self._named.append(g.name)

    def _family_of(self, name: str):
        m = re.fullmatch(r"([A-Za-z_]\w*?)(\d+)", name)
        if m and m.group(1) in self.families:
            return self.families[m.group(1)], int(m.group(2))
        return None

    def gen(self, name: str) -> Gen:
        g = self._gens.get(name)
        if g is not None:
            return g
        hit = self._family_of(name)
        if hit is None:
            alias = self._alias(name)
            if alias:
                return self.gen(alias)
            raise ModelError(f"unknown generator {name!r}")
        f, i = hit
        if i < f.start:
            raise ModelError(f"{name}: family {f.name} starts at {f.start}")
        with self._lock:
            g = self._gens.get(name)
            if g is None:
                g = self._family_gen(f, i)
                self._gens[name] = g
        return g

    def _alias(self, name: str) -> str | None:
        """Underlying names (a3 for abar3) resolve to the full-level generator."""
        for f in self.families:
            if f.endswith("bar"):
                m = re.fullmatch(re.escape(f[:-3]) + r"(\d+)", name)
                if m:
                    return f"{f}{m.group(1)}"
        for n in self._named:
            if n.endswith("bar") and name == n[:-3]:
                return n
        return None

    def _resolves(self, name: str) -> bool:
        try:
            self.gen(name)
        except ModelError:
            return False
        return True

    def underlying_name(self, name: str) -> str:
        g = self.gen(name)
        if g.family and g.family.endswith("bar"):
            return f"{g.family[:-3]}{g.index}"
        if name.endswith("bar"):
            return name[:-3]
        return name

    def env(self) -> dict:
        env = {n: EPoly.monomial(self, ((n, 1),)) for n in self._named}
        for f in self.families.values():
            env[f.name] = _FamilyRef(self, f)
        env["a_s"] = EPoly(self, {(PointClass(1, 0), ()): 1})
        env["u_s"] = EPoly(self, {(PointClass(0, 1), ()): 1})
        return env

    def _poly(self, text: str, extra: dict, line: int, what: str):
        try:
            tree = compile_expr(text)
            env = {**self.env(), **extra}
            for n in free_names(tree) - set(env):
                try:
                    g = self.gen(n)
                except ModelError:
                    continue
                env[n] = EPoly.monomial(self, ((g.name, 1),))
            return evaluate(tree, env)
        except ExprError as exc:
            raise ModelError(f"{what}: {exc}", line, exc.col) from None
        except (UnsupportedConeError, DegreeError) as exc:
            raise ModelError(f"{what}: {exc}", line) from None

    def _add_rule(self, r: RuleSpec):
        try:
            tree = compile_expr(r.lhs)
            compile_expr(r.rhs)
        except ExprError as exc:
            raise ModelError(f"relation: {exc}", r.line, exc.col) from None
        fam_vars = {n for n in free_names(tree) - set(self.env()) if not self._resolves(n)}
        if len(fam_vars) > 1:
            raise ModelError("relations may use at most one index variable", r.line)
        if fam_vars:
            var = fam_vars.pop()
            self._schemas.append((var, r))
            # validate a few instances
            for i in range(1, 4):
                self._instantiate(var, r, i)
        else:
            self._rules.append(self._rule_instance(r, {}))

    def _rule_instance(self, r: RuleSpec, extra: dict) -> _Rule:
        lhs = self._poly(r.lhs, extra, r.line, "relation left side")
        rhs = self._poly(r.rhs, extra, r.line, "relation right side")
        if isinstance(rhs, int):
            rhs = EPoly(self, {(ONE, ()): rhs}) if rhs else EPoly(self, {})
        if not isinstance(lhs, EPoly) or len(lhs.terms) != 1:
            raise ModelError("relation left side must be a single monomial", r.line)
        (pc, m), c = next(iter(lhs.terms.items()))
        if c != 1 or not pc.is_unit or not m:
            raise ModelError("relation left side must be a monic monomial", r.line)
        size = sum(e for _, e in m)
        ldeg = self.mono_degree(m)
        for (p2, m2), _ in rhs.terms.items():
            if sum(e for _, e in m2) >= size:
                raise ModelError("rewrite rules must strictly lower the number of generators "
                                 "(needed for termination)", r.line)
            tdeg = self.term_degree(p2, m2, self.group.order)
            if not same_degree(tdeg, ldeg):
                raise ModelError(f"degree mismatch in relation: {ldeg} vs {tdeg}", r.line)
        return _Rule(m, rhs)

    def _instantiate(self, var: str, r: RuleSpec, i: int) -> _Rule | None:
        key = (id(r), i)
        hit = self._compiled.get(key)
        if hit is None:
            try:
                rule = self._rule_instance(r, {var: i})
            except ModelError as exc:
                if "starts at" in str(exc):
                    rule = None
                else:
                    raise
            hit = (rule,)
            self._compiled[key] = hit
        return hit[0]

    def _table(self, t: TableSpec, kind: str):
        m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*\[\s*([A-Za-z_]\w*)\s*\]\s*", t.target)
        if m:
            if m.group(1) not in self.families:
                raise ModelError(f"{kind}: unknown family {m.group(1)!r}", t.line)
            fam, var = m.group(1), m.group(2)
        else:
            name = t.target.strip()
            self.gen(name) if name in self._gens else self._bad(f"{kind}: unknown generator {name!r}", t.line)
            fam, var = None, None
        try:
            tree = compile_expr(t.rhs)
        except ExprError as exc:
            raise ModelError(f"{kind}: {exc}", t.line, exc.col) from None
        return (fam, var, t.target.strip() if fam is None else None, t.opvar, tree, t.line)

    @staticmethod
    def _bad(msg, line):
        raise ModelError(msg, line)

    # -- monomials -------------------------------------------------------

    def gen_key(self, name: str) -> tuple:
        return self.gen(name).key

    def mono_mul(self, a: Monomial, b: Monomial) -> Monomial:
        if not a:
            return b
        if not b:
            return a
        d = dict(a)
        for n, e in b:
            d[n] = d.get(n, 0) + e
        return tuple(sorted(d.items(), key=lambda t: self.gen_key(t[0])))

    def mono_udeg(self, m: Monomial) -> int:
        return sum(self.gen(n).udeg * e for n, e in m)

    def mono_degree(self, m: Monomial) -> Degree:
        N = self.group.order
        total: Degree = RegDegree(N, 0, 0)
        for n, e in m:
            for _ in range(e):
                total = add_degrees(total, self.gen(n).degree)
        return canonical(total)

    def term_degree(self, pc: PointClass, m: Monomial, level: int) -> Degree:
        if level == 1:
            return integer_degree(self.mono_udeg(m) + pc.degree.dim)
        if pc.is_unit:
            return self.mono_degree(m)
        if self.group.order != 2:
            raise UnsupportedConeError("point-ring coefficients are only available over C2")
        return canonical(add_degrees(self.mono_degree(m), pc.degree))

    def mono_sort(self, m: Monomial) -> tuple:
        return tuple((self.gen_key(n), e) for n, e in m)

    def mono_label(self, m: Monomial, level="G") -> str:
        if not m:
            return "1"
        parts = []
        for n, e in m:
            nm = self.underlying_name(n) if level in ("e", 1) else n
            parts.append(nm + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def weyl_sign(self, m: Monomial) -> int:
        s = 1
        for n, e in m:
            if self.gen(n).sign < 0 and e % 2:
                s = -s
        return s

    def divides(self, a: Monomial, b: Monomial) -> Monomial | None:
        """b / a if a divides b."""
        d = dict(b)
        for n, e in a:
            if d.get(n, 0) < e:
                return None
            d[n] -= e
        return tuple((n, e) for n, e in b if d[n])

    # -- coefficients ----------------------------------------------------

    def reduce_coeff(self, pc: PointClass, c: int) -> int:
        if self.coeff == "F2":
            return c % 2
        return c % 2 if pc.a_exp else c

    # -- rewriting -------------------------------------------------------

    def rules_for(self, m: Monomial) -> Iterable[_Rule]:
        for r in self._rules:
            yield r
        if self._schemas:
            idx = set()
            for n, _ in m:
                g = self.gen(n)
                if g.index is not None:
                    idx.add(g.index)
            for var, spec in self._schemas:
                for i in sorted(idx):
                    rule = self._instantiate(var, spec, i)
                    if rule is not None:
                        yield rule

    def reducible(self, m: Monomial) -> bool:
        return any(self.divides(r.lhs, m) is not None for r in self.rules_for(m))

    def _nf_mono(self, pc: PointClass, m: Monomial, level: int) -> EPoly:
        key = (pc, m, level)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        out = None
        for r in self.rules_for(m):
            rest = self.divides(r.lhs, m)
            if rest is None:
                continue
            rhs = r.rhs if level != 1 else self._restrict_poly(r.rhs)
            acc = EPoly(self, {})
            for (p2, m2), c in rhs.terms.items():
                p3 = self._mul_pc(pc, p2, level)
                if p3 is None:
                    continue
                acc = acc + _scale(self._nf_mono(p3, self.mono_mul(m2, rest), level), c)
            out = acc
            break
        if out is None:
            out = EPoly.monomial(self, m, pc)
        with self._lock:
            self._nf_cache[key] = out
        return out

    def _mul_pc(self, p1: PointClass, p2: PointClass, level: int):
        if level == 1:
            return ONE if (p1.a_exp + p2.a_exp) == 0 else None
        z = p1 * p2
        if z.is_unit:
            return z
        if self.point_ring is None:
            raise UnsupportedConeError("point-ring coefficients are only available over C2")
        return self.point_ring.multiply(p1, p2)

    def normal_form(self, p: EPoly, level: int) -> EPoly:
        acc = EPoly(self, {})
        for (pc, m), c in p.terms.items():
            if level != 1 and not pc.is_unit and self.point_ring is not None:
                if not self.point_ring.exists(pc):
                    raise UnsupportedConeError(f"{pc} is not a class over {self.coeff}")
            acc = acc + _scale(self._nf_mono(pc, m, level), c)
        return acc

    def _restrict_poly(self, p: EPoly) -> EPoly:
        t = {}
        for (pc, m), c in p.terms.items():
            if pc.a_exp:
                continue
            t[(ONE, m)] = t.get((ONE, m), 0) + c
        return EPoly(self, t)

    # -- elements ----------------------------------------------------------

    def top(self) -> int:
        return self.group.order

    def element(self, text: str, level: str | int = "G") -> "Element":
        lv = _level(self, level)
        p = self._poly(text, {}, 0, "element")
        if isinstance(p, int):
            p = EPoly(self, {(ONE, ()): p})
        if not isinstance(p, EPoly):
            raise ModelError("element must be a polynomial")
        if lv == 1 and any(not pc.is_unit for pc, _ in p.terms):
            raise ModelError("point-ring coefficients are not available at level e")
        return Element(self, lv, self.normal_form(p, lv))

    def gen_element(self, name: str, level: str | int = "G") -> "Element":
        g = self.gen(name)
        return Element(self, _level(self, level), EPoly.monomial(self, ((g.name, 1),)))

    def one(self, level: str | int = "G") -> "Element":
        return Element(self, _level(self, level), EPoly(self, {(ONE, ()): 1}))

    def zero(self, level: str | int = "G") -> "Element":
        return Element(self, _level(self, level), EPoly(self, {}))

    # -- structure -------------------------------------------------------

    def is_pure(self) -> bool:
        """Every generator (hence every monomial) sits in a regular degree."""
        gens = self.generators(_probe_bound(self))
        return all(as_regular(g.degree) is not None and as_regular(g.degree).eps == 0 for g in gens)

    def is_isotropic(self) -> bool:
        return self.group.order > 1 and self.is_pure()

    def generators(self, max_udeg: int) -> list[Gen]:
        out = [self._gens[n] for n in self._named if self._gens[n].udeg <= max_udeg]
        for f in self.families.values():
            i = f.start
            while True:
                g = self.gen(f"{f.name}{i}")
                if g.udeg > max_udeg:
                    break
                out.append(g)
                i += 1
        return sorted(out, key=lambda g: g.key)

    def mod2(self) -> "PureRingModel":
        if self.coeff == "F2":
            return self
        return PureRingModel(self.name, self.group, "F2", self.families.values(),
                             [_gen_spec_of(self, n) for n in self._named],
                             self._rule_specs, self._dl_specs, self._cop_specs)

    @property
    def named_specs(self):
        return [_gen_spec_of(self, n) for n in self._named]

    @property
    def specs(self):
        return {
            "families": list(self.families.values()), "gens": self.named_specs,
            "relations": list(self._rule_specs), "dl": list(self._dl_specs),
            "coproduct": list(self._cop_specs),
        }

    def has_dl(self) -> bool:
        return bool(self._dl)

    def has_coproduct(self) -> bool:
        return bool(self._cop)

    def _lookup(self, table, g: Gen):
        for fam, var, name, opvar, tree, line in table:
            if fam is not None and g.family == fam:
                return {var: g.index}, opvar, tree, line
            if name is not None and name == g.name:
                return {}, opvar, tree, line
        return None


def _gen_spec_of(model: PureRingModel, name: str) -> GenSpec:
    # the original text is not needed once the generator is resolved
    g = model._gens[name]
    d = g.degree
    return GenSpec(name, str(g.udeg), _deg_text(d), str(g.sign))


def _deg_text(d: Degree) -> str:
    if isinstance(d, RegDegree):
        if d.stab == 1:
            return str(d.k)
        return f"{d.k}*rho" + ("-1" if d.eps else "")
    if isinstance(d, DegreeC2):
        return f"{d.a}+{d.b}*s"
    raise DegreeError(f"cannot write {d} in a model file")


def _probe_bound(model: PureRingModel) -> int:
    # enough to see every named generator and a few members of each family
    b = max([model._gens[n].udeg for n in model._named] + [0])
    for f in model.families.values():
        b = max(b, model.gen(f"{f.name}{f.start + 3}").udeg)
    return b


def _scale(p: EPoly, c: int) -> EPoly:
    if c == 1:
        return p
    return EPoly(p.model, {k: v * c for k, v in p.terms.items()})


def _level(model: PureRingModel, level) -> int:
    if level in ("e", 1, "1"):
        return 1
    if level in ("G", "top", model.group.order):
        return model.group.order
    raise ModelError(f"level must be e or G, got {level!r}")


# ---------------------------------------------------------------------------
# elements


class Element:
    """A homogeneous class at level e (1) or at the top level G."""

    def __init__(self, model: PureRingModel, level: int, poly: EPoly):
        self.model = model
        self.level = level
        self.poly = poly

    @property
    def terms(self) -> dict:
        return self.poly.terms

    def is_zero(self) -> bool:
        return not self.poly.terms

    def degree(self) -> Degree | None:
        degs = [self.model.term_degree(pc, m, self.level) for pc, m in self.poly.terms]
        if not degs:
            return None
        for d in degs[1:]:
            if not same_degree(d, degs[0]):
                raise DegreeError(f"inhomogeneous element {self}")
        return degs[0]

    def udeg(self) -> int | None:
        d = self.degree()
        return None if d is None else d.dim

    def __eq__(self, o):
        return isinstance(o, Element) and self.level == o.level and self.poly == o.poly

    def __hash__(self):
        return hash((self.level, self.poly))

    def _same(self, o: "Element"):
        if o.model is not self.model or o.level != self.level:
            raise ModelError("elements from different models or levels")

    def __add__(self, o):
        self._same(o)
        return Element(self.model, self.level, self.poly + o.poly)

    def __neg__(self):
        return Element(self.model, self.level, -self.poly)

    def __sub__(self, o):
        return self + (-o)

    def __rmul__(self, k: int):
        return Element(self.model, self.level, _scale(self.poly, k))

    def __mul__(self, o):
        if isinstance(o, int):
            return o * self
        self._same(o)
        return Element(self.model, self.level, self.model.normal_form(self.poly * o.poly, self.level))

    def sorted_terms(self):
        md = self.model
        return sorted(self.poly.terms.items(),
                      key=lambda kv: (md.mono_udeg(kv[0][1]), md.mono_sort(kv[0][1]), kv[0][0]))

    def __str__(self):
        md = self.model
        lv = "e" if self.level == 1 else "G"
        parts = []
        for (pc, m), c in self.sorted_terms():
            if pc.is_unit:
                body = md.mono_label(m, lv)
            elif not m:
                body = str(pc)
            else:
                body = f"{pc}*{md.mono_label(m, lv)}"
            parts.append(_signed(c, body))
        return _join_terms(parts)

    __repr__ = __str__


def restrict(x: Element) -> Element:
    """i_e^*: a_sigma -> 0, u_sigma -> 1, generators to their underlying classes."""
    if x.level == 1:
        return x
    md = x.model
    return Element(md, 1, md.normal_form(md._restrict_poly(x.poly), 1))


def lift(z: Element, target: Degree | None = None) -> Element:
    """The unique top-level element restricting to z.

    Every monomial of z must be a cell of the model in the target degree;
    restriction is injective on regular top cells, so the lift is the same
    coefficient vector.
    """
    md = z.model
    if z.level != 1:
        raise LiftError("lift expects an underlying element", z)
    if not md.is_pure():
        raise LiftError("lifting is only determined for homologically pure models", z)
    t = {}
    for (pc, m), c in z.poly.terms.items():
        d = md.mono_degree(m)
        if target is not None and not same_degree(d, target):
            raise LiftError(f"{md.mono_label(m, 'e')} sits in {d}, not in {target}; "
                            f"{z} is not a restriction", z)
        t[(ONE, m)] = c
    return Element(md, md.group.order, EPoly(md, t))


def lift_product(x: Element, y: Element) -> Element:
    """Product computed by the rewrite system; at the top level the result is
    checked against the underlying product of restrictions."""
    x._same(y)
    md = x.model
    prod = Element(md, x.level, md.normal_form(x.poly * y.poly, x.level))
    if x.level != 1:
        under = md.normal_form(restrict(x).poly * restrict(y).poly, 1)
        if restrict(prod).poly != under:
            raise LiftError(f"restriction of {prod} is not {Element(md, 1, under)}", prod)
    return prod


def weyl(x: Element) -> Element:
    """The generator of C2 acting on an underlying element through the model signs."""
    md = x.model
    return Element(md, x.level, EPoly(md, {(pc, m): c * md.weyl_sign(m)
                                             for (pc, m), c in x.poly.terms.items()}))


def norm_element(x: Element) -> Element:
    """N_e^{C2}(x): lift of x * gamma(x)."""
    md = x.model
    if md.group.order != 2:
        raise ModelError("norms are implemented from e to C2")
    if x.level != 1:
        raise ModelError("the norm takes an underlying element")
    if x.is_zero():
        return md.zero("G")
    n = x.udeg()
    under = Element(md, 1, md.normal_form(x.poly * weyl(x).poly, 1))
    return lift(under, RegDegree(2, n, 0))


def norm_underlying(x: Element) -> Element:
    """i_e^* N(x) = x * gamma(x), computed directly."""
    md = x.model
    return Element(md, 1, md.normal_form(x.poly * weyl(x).poly, 1))


# -- coproducts and conorms


def coproduct_mono(md: PureRingModel, m: Monomial) -> Tensor:
    out = Tensor(md, {((), ()): 1})
    for n, e in m:
        g = md.gen(n)
        hit = md._lookup(md._cop, g)
        if hit is None:
            raise ModelError(f"missing coproduct table for {n}")
        env, _, tree, line = hit
        val = evaluate(tree, {**md.env(), **env})
        if isinstance(val, EPoly):
            raise ModelError(f"coproduct of {n} must be a tensor", line)
        for (a, b) in val.terms:
            if md.mono_udeg(a) + md.mono_udeg(b) != g.udeg:
                raise ModelError(f"coproduct of {n} is not homogeneous", line)
        for _ in range(e):
            out = out * val
    return out


def _normal_tensor(md: PureRingModel, t: Tensor, level: int) -> Tensor:
    acc = Tensor(md, {})
    for (a, b), c in t.terms.items():
        na = md.normal_form(EPoly.monomial(md, a), level)
        nb = md.normal_form(EPoly.monomial(md, b), level)
        piece = {}
        for (p1, m1), c1 in na.terms.items():
            for (p2, m2), c2 in nb.terms.items():
                if not (p1.is_unit and p2.is_unit):
                    raise UnsupportedConeError("coproducts with point-ring coefficients")
                piece[(m1, m2)] = piece.get((m1, m2), 0) + c * c1 * c2
        acc = acc + Tensor(md, piece)
    return acc


@dataclass
class ConormResult:
    kind: str
    level: str
    tensor: Tensor

    def __str__(self):
        return self.tensor.render(self.level)


def conorm_element(x: Element, kind: str = "coproduct") -> ConormResult:
    """Coproduct-type structure maps.

    ``coproduct``: psi(x) in the box square, at the top level.
    ``fold``: psi of the underlying class (the fold map gives no twist).
    ``norm``: the twisted form sum x' (x) gamma(x'') at level e; each tensor
    factor is a top cell, so the tensor is also read as a top-level class.
    """
    md = x.model
    if not md.has_coproduct():
        raise ModelError("missing coproduct table")
    src = x if kind == "coproduct" else restrict(x)
    level = md.group.order if kind == "coproduct" else 1
    acc = Tensor(md, {})
    for (pc, m), c in src.poly.terms.items():
        if not pc.is_unit:
            raise UnsupportedConeError("conorms of elements with point-ring coefficients")
        acc = acc + coproduct_mono(md, m) * c
    acc = _normal_tensor(md, acc, level)
    if kind == "norm":
        acc = Tensor(md, {(a, b): c * md.weyl_sign(b) for (a, b), c in acc.terms.items()})
    elif kind not in ("coproduct", "fold"):
        raise ModelError(f"unknown conorm kind {kind!r}")
    return ConormResult(kind, "G" if level != 1 else "e", acc)


# -- Dyer-Lashof


@dataclass
class DLResult:
    value: Element
    exact: bool
    note: str = ""

    @property
    def mod_decomposables(self) -> bool:
        return not self.exact

    def __str__(self):
        s = str(self.value)
        return s if self.exact else s + " mod decomposables"


def _basis_monomial(x: Element) -> Monomial:
    if len(x.poly.terms) != 1:
        raise DLError("Dyer-Lashof operations take a single basis monomial")
    (pc, m), c = next(iter(x.poly.terms.items()))
    if not pc.is_unit or c % 2 != 1:
        raise DLError("Dyer-Lashof operations take a single basis monomial")
    return m


def indecomposable_part(x: Element) -> Element:
    md = x.model
    t = {(pc, m): c for (pc, m), c in x.poly.terms.items()
         if len(m) == 1 and m[0][1] == 1}
    return Element(md, x.level, EPoly(md, t))


def dyer_lashof(i: int, eps: int, x: Element) -> DLResult:
    """Q^{i rho_2 - eps}(x) for a basis monomial x of a C2 model over F2."""
    md = x.model
    if md.coeff != "F2":
        raise DLError("Dyer-Lashof operations need F2 coefficients (use model.mod2())")
    if md.group.order != 2:
        raise DLError("Dyer-Lashof operations are implemented for C2 models")
    if x.level == 1:
        raise DLError("apply the operation to a top-level class")
    if eps not in (0, 1):
        raise DLError("eps must be 0 or 1")
    m = _basis_monomial(x)
    if eps == 1:
        if md.is_isotropic():
            return DLResult(md.zero("G"), True,
                            "only cells induced from e can receive it; the model has none")
        raise DLError("Q^{i rho - 1} is only determined here for isotropic models")
    deg = as_regular(md.mono_degree(m))
    if deg is None or deg.eps:
        raise DLError(f"{x} is not in a regular degree")
    n = deg.k
    if i < n:
        return DLResult(md.zero("G"), True, "below the degree")
    if i == n:
        return DLResult(lift_product(x, x), True, "the square")
    if not m:
        return DLResult(md.zero("G"), True, "unit")
    if len(m) != 1 or m[0][1] != 1:
        raise DLError("decomposable input and no Cartan data in the model")
    if not md.has_dl():
        raise DLError("the model has no Dyer-Lashof table")
    g = md.gen(m[0][0])
    hit = md._lookup(md._dl, g)
    if hit is None:
        raise DLError(f"no Dyer-Lashof row for {g.name}")
    env, opvar, tree, line = hit
    val = evaluate(tree, {**md.env(), **env, opvar: i})
    if isinstance(val, int):
        val = EPoly(md, {(ONE, ()): val}) if val else EPoly(md, {})
    out = indecomposable_part(Element(md, md.group.order, md.normal_form(val, md.group.order)))
    target = RegDegree(2, n + i, 0)
    if not out.is_zero() and not same_degree(out.degree(), target):
        raise DLError(f"Dyer-Lashof row for {g.name} lands in {out.degree()}, expected {target}")
    return DLResult(out, False, "mod decomposables")


def geometric_dl_table(md: PureRingModel, nmax: int, rmax: int) -> dict[tuple[int, int], dict[str, int]]:
    """Q^{r rho}(g_n) pushed through geometric fixed points, for the single
    family of a C2 model: {(n, r): {fixed-point generator label: coeff}}."""
    if len(md.families) != 1:
        raise DLError("the fixed-point table needs a model with one generator family")
    fam = next(iter(md.families.values()))
    B = expand_basis(md, md.gen(f"{fam.name}{nmax + rmax}").udeg)
    phi = geometric_fixed_basis(B)
    fixed = {c.label: c.dim for c in phi.basis.cells}
    out = {}
    for n in range(fam.start, nmax + 1):
        x = md.gen_element(f"{fam.name}{n}")
        for r in range(0, rmax + 1):
            res = dyer_lashof(r, 0, x)
            row = {}
            for (pc, m), c in res.value.poly.terms.items():
                label = md.mono_label(m)
                if len(m) != 1 or m[0][1] != 1:
                    continue  # decomposable: zero mod decomposables
                row[f"e{fixed[label]}"] = c
            out[(n, r)] = row
    return out


# ---------------------------------------------------------------------------
# bases


def normal_monomials(md: PureRingModel, max_udeg: int) -> list[Monomial]:
    gens = md.generators(max_udeg)
    out: list[Monomial] = []

    def rec(k: int, budget: int, cur: list):
        if k == len(gens):
            m = tuple(cur)
            if not md.reducible(m):
                out.append(m)
            return
        g = gens[k]
        e = 0
        while e * g.udeg <= budget:
            if e:
                cur.append((g.name, e))
            # prune: a reducible prefix stays reducible
            if not e or not md.reducible(tuple(cur)):
                rec(k + 1, budget - e * g.udeg, cur)
            if e:
                cur.pop()
            e += 1

    rec(0, max_udeg, [])
    return sorted(out, key=lambda m: (md.mono_udeg(m), md.mono_sort(m)))


def expand_basis(md: PureRingModel, max_udeg: int) -> Basis:
    """All normal monomials up to an underlying degree, as top cells."""
    N = md.group.order
    cells = [Cell(md.mono_label(m), N, md.mono_degree(m)) for m in normal_monomials(md, max_udeg)]
    return Basis(md.group, tuple(cells), md.coeff).sorted()


def expand_normed_basis(md: PureRingModel, max_udeg: int) -> Basis:
    """N_e^{C2} of the underlying monomial basis, by listing unordered pairs.

    {m, m} is fixed by the swap and gives a top cell in degree |m| rho_2;
    {m1, m2} with m1 != m2 is a free orbit in degree |m1| + |m2|.
    """
    mons = normal_monomials(md, max_udeg)
    lab = md.mono_label
    if md.group.order != 1:
        raise ModelError("the normed basis starts from an underlying (C1) model")
    C2 = cyclic(2)
    cells = []
    for i, a in enumerate(mons):
        for b in mons[i:]:
            d = md.mono_udeg(a) + md.mono_udeg(b)
            if d > max_udeg:
                continue
            if a == b:
                cells.append(Cell(f"N({lab(a)},{lab(a)})", 2, RegDegree(2, md.mono_udeg(a), 0)))
            else:
                cells.append(Cell(f"N({lab(a)},{lab(b)})", 1, integer_degree(d)))
    return Basis(C2, tuple(cells), md.coeff).sorted()


# ---------------------------------------------------------------------------
# shipped models


def builtin_model_path(name: str) -> str:
    from importlib import resources
    fname = name if name.endswith(".model") else f"{name}.model"
    return str(resources.files("equihom").joinpath("data", fname))


def load_builtin(name: str) -> PureRingModel:
    from .io import parse_model
    with open(builtin_model_path(name), encoding="utf-8") as fh:
        return parse_model(fh.read())
