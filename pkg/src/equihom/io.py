"""Model files and result serialization.

Model grammar (one directive per line, ``#`` starts a comment)::

    format: equihom-model/1
    name: BU_R
    group: C2                    # C1, C2, C4, ...
    coeff: Z                     # Z or F2
    family: abar[i] for i>=1: udeg=2*i, deg=i*rho, sign=(-1)**i, zero=unit
    gen: tau0: udeg=1, deg=1, sign=1
    rel: tau0**2 -> 0            # free index variables make a rule schema
    dl: abar[n], i -> binom(n, i-n-1) * abar[n+i]
    coproduct: abar[n] -> sum(abar[j] @ abar[n-j] for j in range(0, n+1))

Degrees in ``deg=`` use ``rho`` and ``s`` (the sign representation).
Results are dictionaries with a ``format`` and ``kind`` field; JSON output
has sorted keys, so equal results serialize byte-identically.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass

from .coefficients import MackeyTable
from .freebasis import Basis, Cell, PhiBasis
from .grading import Degree, DegreeError, parse_degree, pretty
from .groups import GroupError, GSet, parse_group, parse_subgroup, subgroup_name, subgroups
from .purering import (
    ConormResult,
    DLResult,
    Element,
    FamilySpec,
    GenSpec,
    ModelError,
    PureRingModel,
    RuleSpec,
    TableSpec,
)
from .specseq import RingPresentationOutput, TorEntry, TorPage

MODEL_FORMAT = "equihom-model/1"
RESULT_FORMAT = "equihom-result/1"


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    msg: str

    def __str__(self):
        return f"line {self.line}, col {self.col}: {self.msg}"


class ModelParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


def _split_top(text: str, sep: str, offset: int = 0) -> list[tuple[str, int]]:
    """Split on ``sep`` outside brackets; returns (piece, column) pairs."""
    out, depth, start = [], 0, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            out.append((text[start:i], offset + start))
            start = i + len(sep)
            i = start
            continue
        i += 1
    out.append((text[start:], offset + start))
    return [(p.strip(), c + len(p) - len(p.lstrip())) for p, c in out]


def _fields(text: str, col: int, allowed: set[str], lineno: int, diags) -> dict:
    out = {}
    for piece, c in _split_top(text, ",", col):
        if not piece:
            continue
        if "=" not in piece:
            diags.append(Diagnostic(lineno, c + 1, f"expected key=value, got {piece!r}"))
            continue
        k, v = piece.split("=", 1)
        k = k.strip()
        if k not in allowed:
            diags.append(Diagnostic(lineno, c + 1, f"unknown field {k!r}"))
            continue
        if k in out:
            diags.append(Diagnostic(lineno, c + 1, f"duplicate field {k!r}"))
        out[k] = v.strip()
    return out


_FAMILY_RE = re.compile(
    r"^([A-Za-z_]\w*)\s*\[\s*([A-Za-z_]\w*)\s*\]\s+for\s+([A-Za-z_]\w*)\s*>=\s*(-?\d+)\s*:\s*(.*)$")
_GEN_RE = re.compile(r"^([A-Za-z_]\w*)\s*:\s*(.*)$")
_KEYS = {"format", "name", "group", "coeff", "family", "gen", "rel", "dl", "coproduct"}


def parse_model(text: str) -> PureRingModel:
    """Parse and validate a model file; raises :class:`ModelParseError` with
    every positioned diagnostic found."""
    diags: list[Diagnostic] = []
    header: dict = {}
    families, gens, rels, dls, cops = [], [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"^\s*([A-Za-z_]+)\s*:\s?", line)
        if not m:
            diags.append(Diagnostic(lineno, 1, "expected 'key: value'"))
            continue
        key, body, col = m.group(1), line[m.end():].strip(), m.end()
        col += len(line[m.end():]) - len(line[m.end():].lstrip())
        if key not in _KEYS:
            diags.append(Diagnostic(lineno, m.start(1) + 1, f"unknown field {key!r}"))
            continue
        if "format" not in header and key != "format":
            diags.append(Diagnostic(lineno, 1, "the first directive must be 'format:'"))
            header["format"] = None
        if key in ("format", "name", "group", "coeff"):
            if key in header and header[key] is not None:
                diags.append(Diagnostic(lineno, 1, f"duplicate {key!r}"))
            header[key] = (body, lineno, col)
        elif key == "family":
            fm = _FAMILY_RE.match(body)
            if not fm:
                diags.append(Diagnostic(lineno, col + 1,
                                        "expected 'NAME[VAR] for VAR>=START: fields'"))
                continue
            name, var, var2, start, rest = fm.groups()
            if var != var2:
                diags.append(Diagnostic(lineno, col + 1, f"index variable {var2!r} != {var!r}"))
                continue
            f = _fields(rest, col + fm.start(5), {"udeg", "deg", "sign", "zero"}, lineno, diags)
            if "udeg" not in f or "deg" not in f:
                diags.append(Diagnostic(lineno, col + 1, "family needs udeg= and deg="))
                continue
            if f.get("zero", "unit") != "unit":
                diags.append(Diagnostic(lineno, col + 1, "zero= only accepts 'unit'"))
                continue
            families.append(FamilySpec(name, var, int(start), f["udeg"], f["deg"],
                                       f.get("sign", "1"), "zero" in f, lineno))
        elif key == "gen":
            gm = _GEN_RE.match(body)
            if not gm:
                diags.append(Diagnostic(lineno, col + 1, "expected 'NAME: fields'"))
                continue
            f = _fields(gm.group(2), col + gm.start(2), {"udeg", "deg", "sign"}, lineno, diags)
            if "udeg" not in f or "deg" not in f:
                diags.append(Diagnostic(lineno, col + 1, "generator needs udeg= and deg="))
                continue
            gens.append(GenSpec(gm.group(1), f["udeg"], f["deg"], f.get("sign", "1"), lineno))
        else:
            parts = _split_top(body, "->", col)
            if len(parts) != 2 or not parts[0][0] or not parts[1][0]:
                diags.append(Diagnostic(lineno, col + 1, "expected 'LHS -> RHS'"))
                continue
            (lhs, _), (rhs, _) = parts
            if key == "rel":
                rels.append(RuleSpec(lhs, rhs, lineno))
            elif key == "dl":
                lp = _split_top(lhs, ",")
                if len(lp) != 2 or not re.fullmatch(r"[A-Za-z_]\w*", lp[1][0]):
                    diags.append(Diagnostic(lineno, col + 1, "expected 'TARGET, VAR -> RHS'"))
                    continue
                dls.append(TableSpec(lp[0][0], rhs, lp[1][0], lineno))
            else:
                cops.append(TableSpec(lhs, rhs, "", lineno))
    fmt = header.get("format")
    if not fmt:
        if not diags:
            diags.append(Diagnostic(1, 1, "missing 'format:' header"))
    elif fmt[0] != MODEL_FORMAT:
        diags.append(Diagnostic(fmt[1], fmt[2] + 1,
                                f"unsupported format {fmt[0]!r} (expected {MODEL_FORMAT})"))
    for k in ("group", "coeff"):
        if k not in header and not diags:
            diags.append(Diagnostic(1, 1, f"missing '{k}:'"))
    if diags:
        raise ModelParseError(diags)
    try:
        G = parse_group(header["group"][0])
    except GroupError as exc:
        raise ModelParseError([Diagnostic(header["group"][1], header["group"][2] + 1, str(exc))])
    name = header.get("name", ("model", 0, 0))[0]
    try:
        return PureRingModel(name, G, header["coeff"][0], families, gens, rels, dls, cops)
    except ModelError as exc:
        line = exc.line or header["coeff"][1]
        raise ModelParseError([Diagnostic(line, exc.col + 1, exc.msg)]) from None


def emit_model(model: PureRingModel) -> str:
    """Model file text for a model (round-trips through :func:`parse_model`)."""
    out = [f"format: {MODEL_FORMAT}", f"name: {model.name}", f"group: {model.group}",
           f"coeff: {model.coeff}"]
    sp = model.specs
    for f in sp["families"]:
        z = ", zero=unit" if f.zero_unit else ""
        out.append(f"family: {f.name}[{f.var}] for {f.var}>={f.start}: udeg={f.udeg}, "
                   f"deg={f.deg}, sign={f.sign}{z}")
    for g in sp["gens"]:
        out.append(f"gen: {g.name}: udeg={g.udeg}, deg={g.deg}, sign={g.sign}")
    for r in sp["relations"]:
        out.append(f"rel: {r.lhs} -> {r.rhs}")
    for t in sp["dl"]:
        out.append(f"dl: {t.target}, {t.opvar} -> {t.rhs}")
    for t in sp["coproduct"]:
        out.append(f"coproduct: {t.target} -> {t.rhs}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# results


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()[:16]


def _deg(d: Degree) -> str:
    return str(d)


def _page_result(p: TorPage) -> dict:
    rows = []
    for (s, D), e in p.sorted_items():
        rows.append({"s": s, "degree": _deg(D), "rank": e.rank,
                     "torsion": list(e.torsion), "labels": list(e.labels)})
    return {"kind": "tor_page", "page": p.kind, "group": p.group, "coeff": p.coeff,
            "truncation": p.truncation, "exterior": p.exterior, "marker": p.marker,
            "checks": dict(p.checks), "entries": rows}


def _presentation_result(r: RingPresentationOutput) -> dict:
    return {"kind": "presentation", "name": r.name, "group": r.group, "coeff": r.coeff,
            "truncation": r.truncation, "collapse": r.collapse, "diagnostic": r.diagnostic,
            "generators": [{"name": n, "degree": _deg(d)} for n, d in r.generators],
            "relations": [{"lhs": l, "rhs": rr} for l, rr in r.relations]}


def _basis_result(B: Basis, flagged=()) -> dict:
    out = {"kind": "basis", "group": str(B.group), "coeff": B.coeff,
           "cells": [{"label": c.label, "orbit": f"{B.group}/{subgroup_name(c.stab)}",
                      "stab": c.stab, "degree": _deg(c.degree)} for c in B.cells]}
    if flagged:
        out["flagged"] = list(flagged)
    return out


def _mackey_result(M: MackeyTable) -> dict:
    levels = {}
    for H in subgroups(M.group):
        entry = {"group": M.describe(H), "orders": list(M.levels[H]),
                 "weyl": M.weyl[H]}
        if M.labels.get(H) and any(M.labels[H]):
            entry["labels"] = list(M.labels[H])
        if H > 1:
            entry["res"] = M.res[H]
            entry["tr"] = M.tr[H]
        levels[subgroup_name(H)] = entry
    return {"kind": "mackey", "name": M.name, "group": str(M.group), "levels": levels}


def to_result(obj, **extra) -> dict:
    """A JSON-ready result tree for any computation output."""
    if isinstance(obj, dict):
        out = dict(obj)
    elif isinstance(obj, TorPage):
        out = _page_result(obj)
    elif isinstance(obj, RingPresentationOutput):
        out = _presentation_result(obj)
    elif isinstance(obj, PhiBasis):
        out = _basis_result(obj.basis, obj.flagged)
    elif isinstance(obj, Basis):
        out = _basis_result(obj)
    elif isinstance(obj, MackeyTable):
        out = _mackey_result(obj)
    elif isinstance(obj, GSet):
        out = {"kind": "gset", "group": str(obj.group), "value": str(obj),
               "orbits": [{"stab": s, "mult": m} for s, m in obj.orbits]}
    elif isinstance(obj, DLResult):
        deg = obj.value.degree()
        out = {"kind": "element", "value": str(obj.value), "exact": obj.exact,
               "note": obj.note, "degree": _deg(deg) if deg is not None else None}
    elif isinstance(obj, Element):
        deg = obj.degree()
        out = {"kind": "element", "value": str(obj), "exact": True,
               "level": "e" if obj.level == 1 else str(obj.model.group),
               "degree": _deg(deg) if deg is not None else None}
    elif isinstance(obj, ConormResult):
        out = {"kind": "tensor", "map": obj.kind, "level": obj.level, "value": str(obj)}
    else:
        raise TypeError(f"no result form for {type(obj).__name__}")
    out.setdefault("format", RESULT_FORMAT)
    out.update(extra)
    return out


def emit_result(result, fmt: str = "json") -> str:
    """Canonical serialization: sorted-key JSON, or a text rendering."""
    tree = to_result(result)
    if fmt == "json":
        return json.dumps(tree, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        return render_text(tree)
    raise ValueError(f"unknown format {fmt!r} (json or text)")


def parse_result(text: str) -> dict:
    tree = json.loads(text)
    if not isinstance(tree, dict) or tree.get("format") != RESULT_FORMAT:
        raise ValueError(f"not an {RESULT_FORMAT} document")
    return tree


def presentation_from_result(tree: dict) -> RingPresentationOutput:
    if tree.get("kind") != "presentation":
        raise ValueError("not a presentation result")
    return RingPresentationOutput(
        tree["group"], tree["coeff"], tree["truncation"],
        [(g["name"], parse_degree(g["degree"])) for g in tree["generators"]],
        [(r["lhs"], r["rhs"]) for r in tree["relations"]],
        tree["collapse"], tree.get("diagnostic", ""), tree.get("name", "BBU_R"))


def page_from_result(tree: dict) -> TorPage:
    if tree.get("kind") != "tor_page":
        raise ValueError("not a Tor page result")
    entries = {}
    for row in tree["entries"]:
        entries[(row["s"], parse_degree(row["degree"]))] = TorEntry(
            row["rank"], tuple(row["torsion"]), tuple(row["labels"]))
    return TorPage(tree["page"], tree["group"], tree["coeff"], tree["truncation"], entries,
                   tree["exterior"], tree["marker"], dict(tree.get("checks", {})))


def basis_from_result(tree: dict) -> Basis:
    if tree.get("kind") != "basis":
        raise ValueError("not a basis result")
    G = parse_group(tree["group"])
    cells = tuple(Cell(c["label"], c["stab"], parse_degree(c["degree"])) for c in tree["cells"])
    return Basis(G, cells, tree["coeff"])


# ---------------------------------------------------------------------------
# text rendering


def _pd(text) -> str:
    if text is None:
        return "-"
    try:
        return pretty(parse_degree(text))
    except DegreeError:
        return text


def _table(rows: list[list[str]], indent: str = "  ") -> list[str]:
    if not rows:
        return []
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return [indent + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def render_text(tree: dict) -> str:
    kind = tree.get("kind")
    out: list[str] = []
    if kind == "presentation":
        out.append(f"{tree['name']} over {tree['group']}, coefficients {tree['coeff']}, "
                   f"truncation {tree['truncation']}")
        if tree["collapse"]:
            out.append("collapse: certified (generalized isotropic)")
        else:
            out.append(f"collapse: not certified ({tree['diagnostic']})")
        out.append("generators:")
        out += _table([[g["name"], _pd(g["degree"]), g["degree"]] for g in tree["generators"]])
        out.append("relations:")
        out += _table([[r["lhs"].replace("**", "^"), "=", r["rhs"]] for r in tree["relations"]])
    elif kind == "tor_page":
        out.append(f"{tree['page']} page over {tree['group']}, coefficients {tree['coeff']}, "
                   f"truncation {tree['truncation']}")
        out.append(tree["marker"])
        if tree.get("checks"):
            out.append("checks: " + ", ".join(f"{k}={'ok' if v else 'FAILED'}"
                                              for k, v in sorted(tree["checks"].items())))
        if not tree["entries"]:
            out.append("(empty)")
        rows = [["s", "degree", "rank", "torsion", "classes"]]
        for e in tree["entries"]:
            tor = " + ".join(f"Z/{t}" for t in e["torsion"]) or "-"
            rows.append([str(e["s"]), _pd(e["degree"]), str(e["rank"]), tor,
                         ", ".join(e["labels"])])
        if tree["entries"]:
            out += _table(rows)
    elif kind == "basis":
        out.append(f"basis over {tree['group']} ({len(tree['cells'])} cells)")
        rows = [[c["label"], c["orbit"], _pd(c["degree"])] for c in tree["cells"]]
        out += _table(rows)
        if tree.get("flagged"):
            out.append("from k*rho-1 cells: " + ", ".join(tree["flagged"]))
    elif kind == "mackey":
        out.append(f"{tree['name'] or 'Mackey functor'} over {tree['group']}")
        for lvl, entry in sorted(tree["levels"].items(), key=lambda kv: parse_subgroup(kv[0])):
            lab = ""
            if entry.get("labels"):
                lab = " (" + ", ".join(x for x in entry["labels"] if x) + ")"
            out.append(f"  level {lvl}: {entry['group']}{lab}")
    elif kind == "gset":
        out.append(tree["value"])
    elif kind == "element":
        note = "" if tree.get("exact", True) else " mod decomposables"
        deg = f"  in {_pd(tree['degree'])}" if tree.get("degree") else ""
        out.append(f"{tree['value']}{note}{deg}")
    elif kind == "tensor":
        out.append(tree["value"])
    else:
        for k in sorted(tree):
            if k != "format":
                out.append(f"{k}: {tree[k]}")
    return "\n".join(out) + "\n"
