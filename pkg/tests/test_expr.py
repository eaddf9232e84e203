import pytest

from equihom.expr import ExprError, binom, compile_expr, evaluate, free_names


def test_arithmetic_and_functions():
    assert evaluate("2*i + 1", {"i": 3}) == 7
    assert evaluate("(-1)^i", {"i": 3}) == -1
    assert evaluate("binom(n, i-n-1)", {"n": 2, "i": 3}) == 1
    assert evaluate("sum(j*j for j in range(0, 4))", {}) == 14
    assert binom(3, -1) == 0 and binom(3, 4) == 0


def test_free_names_skip_bound_variables():
    tree = compile_expr("sum(a[j] @ a[n-j] for j in range(0, n+1))")
    assert free_names(tree) == {"a", "n"}


@pytest.mark.parametrize("bad", ["__import__('os')", "x.y", "'s'", "1.5", "lambda: 1", "f(x=1)"])
def test_rejects_anything_outside_the_whitelist(bad):
    with pytest.raises(ExprError):
        evaluate(bad, {"x": 1, "f": abs})


def test_syntax_errors_have_columns():
    with pytest.raises(ExprError) as info:
        compile_expr("1 + * 2")
    assert info.value.col >= 0


def test_unknown_name():
    with pytest.raises(ExprError, match="unknown name"):
        evaluate("q + 1", {})
