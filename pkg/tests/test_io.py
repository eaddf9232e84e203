import json

import pytest

from equihom.coefficients import point_homology
from equihom.freebasis import Basis, Cell
from equihom.grading import DegreeC2, RegDegree
from equihom.groups import cyclic
from equihom.io import (
    ModelParseError,
    basis_from_result,
    digest,
    emit_model,
    emit_result,
    page_from_result,
    parse_model,
    parse_result,
    presentation_from_result,
    render_text,
    to_result,
)
from equihom.purering import builtin_model_path, load_builtin
from equihom.specseq import algebra_from_model, bar_e2, bbur_presentation

HEAD = "format: equihom-model/1\nname: X\ngroup: C2\ncoeff: Z\n"


def diagnostics(text):
    with pytest.raises(ModelParseError) as info:
        parse_model(text)
    return [(d.line, d.col, d.msg) for d in info.value.diagnostics]


@pytest.mark.parametrize("name", ["bur", "dual_steenrod"])
def test_model_round_trip(name):
    with open(builtin_model_path(name)) as fh:
        md = parse_model(fh.read())
    text = emit_model(md)
    again = emit_model(parse_model(text))
    assert again == text
    assert digest(text) == digest(again)
    assert emit_model(load_builtin(name)) == text


def test_dimension_mismatch_is_located():
    (line, col, msg), = diagnostics(HEAD + "gen: x: udeg=3, deg=rho\n")
    assert line == 5 and "dimension mismatch" in msg


def test_header_diagnostics():
    assert diagnostics("name: X\n")[0][2] == "the first directive must be 'format:'"
    assert "unsupported format" in diagnostics("format: equihom-model/2\ngroup: C2\ncoeff: Z\n")[0][2]
    (line, col, msg), = diagnostics(HEAD.replace("name: X\n", "") + "gen: x: udeg=2, deg=rho, colour=red\n")
    assert (line, msg) == (4, "unknown field 'colour'") and col > 1


def test_comments_and_blank_lines():
    md = parse_model(HEAD + "# a comment\n\ngen: x: udeg=2, deg=rho, sign=-1\n")
    assert md.gen("x").sign == -1


def test_expression_errors_carry_positions():
    text = HEAD + ("family: abar[i] for i>=1: udeg=2*i, deg=i*rho, sign=(-1)**i, zero=unit\n"
                   "dl: abar[n], i -> abar[n+i+]\n")
    (line, col, msg), = diagnostics(text)
    assert line == 6 and "syntax error" in msg


def test_presentation_round_trip():
    _, pres = bbur_presentation(load_builtin("bur"), 10)
    text = emit_result(to_result(pres), "json")
    back = presentation_from_result(parse_result(text))
    assert back.generators == pres.generators and back.relations == pres.relations
    assert emit_result(to_result(back), "json") == text


def test_page_round_trip():
    page = bar_e2(algebra_from_model(load_builtin("bur"), 8), trunc=8)
    back = page_from_result(parse_result(emit_result(to_result(page), "json")))
    assert {k: (e.rank, e.labels) for k, e in back.entries.items()} == \
        {k: (e.rank, e.labels) for k, e in page.entries.items()}


def test_basis_round_trip():
    B = Basis(cyclic(4), (Cell("x", 4, RegDegree(4, 1)), Cell("y", 2, DegreeC2(3, 1)), Cell("f", 1, 2)))
    assert basis_from_result(json.loads(emit_result(to_result(B), "json"))) == B


def test_output_is_deterministic_and_sorted():
    M = point_homology("f2", DegreeC2(1, -2))
    a = emit_result(to_result(M), "json")
    assert a == emit_result(to_result(M), "json")
    tree = json.loads(a)
    assert list(tree) == sorted(tree) and tree["format"] == "equihom-result/1"
    assert render_text(tree).splitlines()[-1] == "  level C2: F2 (a_s*u_s)"
