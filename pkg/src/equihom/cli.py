"""Command-line front end.

Exit codes: 0 success, 1 domain error (message from the originating module),
2 usage error (bad flags, resource guards).
"""
from __future__ import annotations

import argparse
import os
import sys

from .coefficients import MackeyError, builtin, point_homology
from .expr import ExprError
from .freebasis import (
    Basis,
    BasisError,
    Cell,
    box,
    dual_basis,
    generalized_isotropic,
    geometric_fixed_basis,
    homology_of_pure,
    is_isotropic,
    isotropic_witness,
    norm_basis,
)
from .grading import DegreeC2, DegreeError, parse_degree
from .groups import (
    MAX_COINDUCE_INDEX,
    GroupError,
    GSet,
    coinduce,
    parse_group,
    parse_subgroup,
    product_gset,
    restrict_gset,
)
from .io import ModelParseError, basis_from_result, emit_result, parse_model, parse_result, to_result
from .purering import (
    DLError,
    LiftError,
    ModelError,
    PureRingModel,
    builtin_model_path,
    conorm_element,
    dyer_lashof,
    expand_basis,
    lift_product,
    load_builtin,
    norm_element,
)
from .specseq import (
    DEFAULT_TRUNC,
    MAX_TRUNC,
    SpecSeqError,
    algebra_from_model,
    bar_e2,
    bbur_presentation,
    cohomology_algebra,
    coinduce_result,
    em_e2,
    twisted_bar_e2,
)

EXPAND_LIMIT = 32
DOMAIN_ERRORS = (GroupError, DegreeError, MackeyError, BasisError, ModelError, ModelParseError,
                 SpecSeqError, DLError, LiftError, ExprError)


class UsageError(Exception):
    pass


def _trunc(args, default: int, limit: int = MAX_TRUNC) -> int:
    if getattr(args, "trunc", None) is not None:
        t = args.trunc
    else:
        raw = os.environ.get("EQUIHOM_TRUNC", "")
        if raw:
            try:
                t = int(raw)
            except ValueError:
                raise UsageError(f"EQUIHOM_TRUNC must be an integer, got {raw!r}") from None
        else:
            t = default
    if t < 0:
        raise UsageError("truncation must be non-negative")
    if t > limit:
        raise UsageError(f"truncation {t} exceeds the resource guard ({limit}); lower --trunc")
    return t


def _group(text: str):
    try:
        return parse_group(text)
    except GroupError as exc:
        raise UsageError(str(exc)) from None


def _sub(text: str) -> int:
    try:
        return parse_subgroup(text)
    except ValueError:
        raise UsageError(f"cannot parse subgroup {text!r}") from None


def _orbits(G, text: str) -> GSet:
    """'C2,C2,e' -> one orbit per entry; 'C2*3' repeats."""
    counts: dict[int, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, mult = part.partition("*")
        counts[_sub(name)] = counts.get(_sub(name), 0) + (int(mult) if mult else 1)
    return GSet.from_counts(G, counts)


def _load_model(spec: str) -> PureRingModel:
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_model(fh.read())
    name = spec.replace("-", "_")
    if os.path.exists(builtin_model_path(name)):
        return load_builtin(name)
    raise UsageError(f"no model file {spec!r} (built-ins: bur, dual_steenrod)")


def _load_basis(spec: str, G) -> Basis:
    """A JSON basis result file, or inline 'label:stab:degree;...'."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            B = basis_from_result(parse_result(fh.read()))
        if G is not None and B.group != G:
            raise UsageError(f"basis file is over {B.group}, --group is {G}")
        return B
    if G is None:
        raise UsageError("inline bases need --group")
    cells = []
    for part in spec.split(";"):
        if not part.strip():
            continue
        bits = part.split(":")
        if len(bits) != 3:
            raise UsageError(f"cell {part!r} is not label:stab:degree")
        label, stab, deg = (b.strip() for b in bits)
        cells.append(Cell(label, _sub(stab), parse_degree(deg)))
    return Basis(G, tuple(cells))


def _emit(obj, args, **extra) -> None:
    sys.stdout.write(emit_result(to_result(obj, **extra), args.format))


# ---------------------------------------------------------------------------
# subcommands


def cmd_gset(args) -> int:
    G = _group(args.group)
    T = _orbits(G, args.orbits)
    if args.op == "prod":
        if args.with_ is not None:
            out = product_gset(T, _orbits(G, args.with_))
        else:
            if sum(m for _, m in T.orbits) < 2:
                raise UsageError("gset prod needs two orbits (or --with)")
            out = None
            for s, m in T.orbits:
                for _ in range(m):
                    one = GSet.orbit(G, s)
                    out = one if out is None else product_gset(out, one)
    elif args.op == "res":
        if args.to is None:
            raise UsageError("gset res needs --to SUBGROUP")
        out = restrict_gset(G, _sub(args.to), T)
    else:
        if args.from_ is None:
            raise UsageError("gset coind needs --from SUBGROUP (the orbits are over it)")
        H = _sub(args.from_)
        if G.order // H > MAX_COINDUCE_INDEX:
            raise UsageError(f"index [{G}:{H}] exceeds the resource guard ({MAX_COINDUCE_INDEX})")
        out = coinduce(G, H, _orbits(G.subgroup(H), args.orbits))
    _emit(out, args)
    return 0


def cmd_point(args) -> int:
    try:
        a, b = (int(x) for x in args.deg.split(","))
    except ValueError:
        raise UsageError("--deg takes a,b") from None
    _emit(point_homology(args.coeff, DegreeC2(a, b)), args)
    return 0


def cmd_basis(args) -> int:
    G = _group(args.group) if args.group else None
    B = _load_basis(args.basis, G)
    if args.op == "box":
        if not args.basis2:
            raise UsageError("basis box needs --basis2")
        _emit(box(B, _load_basis(args.basis2, B.group)), args)
    elif args.op == "norm":
        if not args.to:
            raise UsageError("basis norm needs --to GROUP (the basis is over the subgroup)")
        T = _group(args.to)
        if B.group.prime != T.prime or T.order % B.group.order:
            raise UsageError(f"{B.group} is not a subgroup of {T}")
        if T.order // B.group.order > MAX_COINDUCE_INDEX:
            raise UsageError(f"index exceeds the resource guard ({MAX_COINDUCE_INDEX})")
        _emit(norm_basis(B.group.order, T, B, _trunc(args, DEFAULT_TRUNC)), args)
    elif args.op == "dual":
        _emit(dual_basis(B), args)
    elif args.op == "homology":
        if args.sub is None or args.k is None:
            raise UsageError("basis homology needs --sub K --k k [--eps e]")
        M = builtin(args.coeff, B.group)
        _emit(homology_of_pure(B, _sub(args.sub), args.k, args.eps, M), args)
    elif args.op == "isotropic":
        w = isotropic_witness(B)
        _emit({"kind": "predicate", "isotropic": is_isotropic(B),
               "generalized_isotropic": generalized_isotropic(B),
               "witness": [w[0].label, w[1].label] if w else None}, args)
    else:
        _emit(geometric_fixed_basis(B), args)
    return 0


def cmd_pure(args) -> int:
    md = _load_model(args.model)
    if args.op == "expand":
        _emit(expand_basis(md, _trunc(args, DEFAULT_TRUNC, EXPAND_LIMIT)), args)
        return 0
    if args.x is None:
        raise UsageError(f"pure {args.op} needs --x ELEMENT")
    if args.op == "mult":
        if args.y is None:
            raise UsageError("pure mult needs --y ELEMENT")
        x, y = md.element(args.x, args.level), md.element(args.y, args.level)
        _emit(lift_product(x, y), args)
    elif args.op == "norm":
        _emit(norm_element(md.element(args.x, "e")), args)
    elif args.op == "conorm":
        _emit(conorm_element(md.element(args.x, "G"), args.kind), args)
    else:
        if args.i is None:
            raise UsageError("pure dl needs --i")
        F = md.mod2()
        note = {} if md.coeff == "F2" else {"reduced": "coefficients reduced mod 2"}
        _emit(dyer_lashof(args.i, args.eps, F.element(args.x, "G")), args, **note)
    return 0


def cmd_ss(args) -> int:
    md = _load_model(args.model)
    t = _trunc(args, DEFAULT_TRUNC)
    if args.op == "bar":
        page = bar_e2(algebra_from_model(md, t), trunc=t)
    elif args.op == "twisted":
        page = twisted_bar_e2(md, None, t)
    else:
        page = em_e2(cohomology_algebra(md, t), trunc=t)
    _emit(page, args)
    return 0


def cmd_demo(args) -> int:
    md = load_builtin("bur")
    if args.coeff == "f2":
        md = md.mod2()
    if args.name == "bur":
        _emit(expand_basis(md, _trunc(args, DEFAULT_TRUNC, EXPAND_LIMIT)), args)
    elif args.name == "bbur":
        _, pres = bbur_presentation(md, _trunc(args, DEFAULT_TRUNC))
        _emit(pres, args)
    elif args.name == "coinduced-c4":
        t = _trunc(args, 6)
        _, pres = bbur_presentation(md, t)
        _emit(coinduce_result(pres, parse_group("C4"), t), args)
    else:
        ds = load_builtin("dual_steenrod")
        t = _trunc(args, 4)
        _emit(norm_basis(1, parse_group("C2"), expand_basis(ds, t), t), args)
    return 0


def cmd_check(args) -> int:
    from .selfcheck import run_checks
    results = run_checks()
    if args.format == "json":
        _emit({"kind": "check", "results": [
            {"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}, args)
    else:
        for r in results:
            line = f"{'PASS' if r.ok else 'FAIL'}  {r.name}"
            sys.stdout.write(line + (f": {r.detail}" if r.detail else "") + "\n")
    return 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="equihom", description="Equivariant homology of free spectra over cyclic p-groups.")
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text",
                     help="output format (default: text)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gset", parents=[fmt], help="finite G-set arithmetic")
    g.add_argument("op", choices=("prod", "res", "coind"))
    g.add_argument("--group", required=True)
    g.add_argument("--orbits", required=True, help="stabilizers, e.g. C2,C2 or e*3")
    g.add_argument("--with", dest="with_", help="second G-set for prod")
    g.add_argument("--to", help="subgroup for res")
    g.add_argument("--from", dest="from_", help="subgroup the orbits of coind live over")
    g.set_defaults(fn=cmd_gset)

    ph = sub.add_parser("point-homology", parents=[fmt], help="RO(C2)-graded homology of a point")
    ph.add_argument("--deg", required=True, help="a,b for a + b*sigma")
    ph.add_argument("--coeff", choices=("f2", "z"), default="f2")
    ph.set_defaults(fn=cmd_point)

    b = sub.add_parser("basis", parents=[fmt], help="free bases")
    b.add_argument("op", choices=("box", "norm", "dual", "homology", "isotropic", "phi"))
    b.add_argument("--basis", required=True, help="JSON basis file or label:stab:degree;...")
    b.add_argument("--basis2")
    b.add_argument("--group")
    b.add_argument("--to", help="target group for norm")
    b.add_argument("--trunc", type=int)
    b.add_argument("--sub", help="subgroup K for homology")
    b.add_argument("--k", type=int)
    b.add_argument("--eps", type=int, choices=(0, 1), default=0)
    b.add_argument("--coeff", default="z", help="z, f2, fp, burnside, dual-f2")
    b.set_defaults(fn=cmd_basis)

    pu = sub.add_parser("pure", parents=[fmt], help="homologically pure ring models")
    pu.add_argument("op", choices=("expand", "mult", "norm", "conorm", "dl"))
    pu.add_argument("--model", required=True, help="model file, or bur / dual_steenrod")
    pu.add_argument("--x")
    pu.add_argument("--y")
    pu.add_argument("--level", choices=("G", "e"), default="G")
    pu.add_argument("--kind", choices=("coproduct", "fold", "norm"), default="coproduct")
    pu.add_argument("--i", type=int)
    pu.add_argument("--eps", type=int, choices=(0, 1), default=0)
    pu.add_argument("--trunc", type=int)
    pu.set_defaults(fn=cmd_pure)

    ss = sub.add_parser("ss", parents=[fmt], help="E2 pages of Tor spectral sequences")
    ss.add_argument("op", choices=("bar", "twisted", "em"))
    ss.add_argument("--model", required=True)
    ss.add_argument("--trunc", type=int)
    ss.set_defaults(fn=cmd_ss)

    d = sub.add_parser("demo", parents=[fmt], help="worked examples")
    d.add_argument("name", choices=("bur", "bbur", "coinduced-c4", "dual-steenrod"))
    d.add_argument("--coeff", choices=("z", "f2"), default="z")
    d.add_argument("--trunc", type=int)
    d.set_defaults(fn=cmd_demo)

    c = sub.add_parser("check", parents=[fmt], help="run the invariant and oracle self-checks")
    c.set_defaults(fn=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
