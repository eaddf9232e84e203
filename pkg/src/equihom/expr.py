"""A small, closed expression language for model files.

Expressions use Python syntax (parsed with :mod:`ast`) but only a whitelist
of node types is interpreted: integer literals, names, subscripts,
``+ - * ** @``, unary minus, calls to whitelisted functions, and single
generator expressions (``sum(x[j] @ x[n-j] for j in range(0, n+1))``).
Nothing is handed to ``eval``.
"""
from __future__ import annotations

import ast
import operator
from math import comb
from typing import Any, Mapping


class ExprError(ValueError):
    def __init__(self, msg: str, col: int = 0):
        super().__init__(msg)
        self.col = col


def binom(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _sum(items, start=0):
    total = start
    for x in items:
        total = total + x
    return total


FUNCTIONS = {"binom": binom, "range": range, "sum": _sum, "min": min, "max": max}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Pow: operator.pow,
    ast.MatMult: operator.matmul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}

_CMPOPS = {
    ast.Lt: operator.lt, ast.LtE: operator.le, ast.Gt: operator.gt,
    ast.GtE: operator.ge, ast.Eq: operator.eq, ast.NotEq: operator.ne,
}


def compile_expr(text: str) -> ast.Expression:
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"syntax error in {text!r}: {exc.msg}", (exc.offset or 1) - 1) from None
    _validate(tree.body)
    return tree


_ALLOWED = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load,
    ast.Subscript, ast.Call, ast.GeneratorExp, ast.comprehension, ast.Store,
    ast.USub, ast.UAdd, ast.Compare,
) + tuple(_BINOPS) + tuple(_CMPOPS)


def _validate(node: ast.AST) -> None:
    for sub in ast.walk(node):
        if not isinstance(sub, _ALLOWED):
            raise ExprError(f"unsupported syntax: {type(sub).__name__}",
                            getattr(sub, "col_offset", 0))
        if isinstance(sub, ast.Constant) and not isinstance(sub.value, int):
            raise ExprError("only integer literals are allowed", sub.col_offset)
        if isinstance(sub, ast.Call):
            if not isinstance(sub.func, ast.Name) or sub.keywords:
                raise ExprError("only plain calls to named functions are allowed", sub.col_offset)
        if isinstance(sub, ast.comprehension) and (sub.is_async or not isinstance(sub.target, ast.Name)):
            raise ExprError("comprehensions must bind a single name", 0)


def free_names(tree: ast.AST) -> set[str]:
    bound = {g.target.id for g in ast.walk(tree) if isinstance(g, ast.comprehension)}
    names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name) and isinstance(n.ctx, ast.Load)}
    return names - bound - set(FUNCTIONS)


def evaluate(tree: ast.AST | str, env: Mapping[str, Any]) -> Any:
    if isinstance(tree, str):
        tree = compile_expr(tree)
    return _eval(tree.body if isinstance(tree, ast.Expression) else tree, dict(env))


def _eval(node: ast.AST, env: dict) -> Any:
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        if node.id in FUNCTIONS:
            return FUNCTIONS[node.id]
        raise ExprError(f"unknown name {node.id!r}", node.col_offset)
    if isinstance(node, ast.BinOp):
        left, right = _eval(node.left, env), _eval(node.right, env)
        try:
            return _BINOPS[type(node.op)](left, right)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ExprError(str(exc), node.col_offset) from None
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval(comp, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.Subscript):
        base = _eval(node.value, env)
        idx = _eval(node.slice, env)
        try:
            return base[idx]
        except (KeyError, IndexError, TypeError) as exc:
            raise ExprError(f"bad subscript: {exc}", node.col_offset) from None
    if isinstance(node, ast.Call):
        fn = _eval(node.func, env)
        args = [_eval(a, env) for a in node.args]
        try:
            return fn(*args)
        except TypeError as exc:
            raise ExprError(str(exc), node.col_offset) from None
    if isinstance(node, ast.GeneratorExp):
        if len(node.generators) != 1:
            raise ExprError("only one 'for' clause is supported", node.col_offset)
        gen = node.generators[0]
        it = _eval(gen.iter, env)
        out = []
        for v in it:
            inner = dict(env)
            inner[gen.target.id] = v
            if all(_eval(c, inner) for c in gen.ifs):
                out.append(_eval(node.elt, inner))
        return out
    raise ExprError(f"unsupported syntax: {type(node).__name__}", getattr(node, "col_offset", 0))
