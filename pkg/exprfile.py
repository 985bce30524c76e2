"""
Expression files for user-defined factorization families

Format (one `key = value` per line, `#` starts a comment):

    # Hermite: y'' - 2 xi y' + 2 s y = 0
    P = 1
    Q = -2*xi
    R = 2*s
    y = ...            optional, with dy enables r estimation
    dy = ...
    domain = 0.1, 2
    base = 0           optional, defaults to the left end of the domain

Grammar: numbers, the variable (ξ, xi or x), the index s, parentheses,
+ - * / and ^ (or **) with an integer exponent. Anything else, function
calls included, is rejected while parsing.
"""

import ast
import logging
from pathlib import Path
from typing import Dict, Union

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from exact import AbnsError
from factoengine import FamilySpec

logger = logging.getLogger(__name__)

XI = sp.Symbol("xi", real=True)
S = sp.Symbol("s", real=True)

_NAMES = {"xi": XI, "x": XI, "ξ": XI, "s": S}
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_OPERATORS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_REQUIRED = ("P", "Q", "R", "domain")
_KNOWN = _REQUIRED + ("y", "dy", "base", "name")


class ExpressionError(AbnsError):
    """An expression file does not fit the accepted grammar."""


def _is_integer_literal(node: ast.AST) -> bool:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        node = node.operand
    return isinstance(node, ast.Constant) and type(node.value) is int


def _check_syntax(source: str, text: str) -> None:
    # runs on the raw text, before sympy evaluates anything
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"cannot parse {text!r}: {e.msg}") from e
    for node in ast.walk(tree):
        if isinstance(node, ast.BinOp):
            if not isinstance(node.op, _OPERATORS):
                raise ExpressionError(f"operator {type(node.op).__name__} is outside the expression grammar in {text!r}")
            if isinstance(node.op, ast.Pow) and not _is_integer_literal(node.right):
                raise ExpressionError(f"exponent is not an integer in {text!r}")
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.UAdd, ast.USub)):
                raise ExpressionError(f"operator {type(node.op).__name__} is outside the expression grammar in {text!r}")
        elif isinstance(node, ast.Constant):
            if type(node.value) not in (int, float):
                raise ExpressionError(f"literal {node.value!r} is outside the expression grammar in {text!r}")
        elif isinstance(node, ast.Name):
            if node.id not in _NAMES:
                raise ExpressionError(f"unknown name {node.id} in {text!r}")
        elif not isinstance(node, (ast.Expression, ast.operator, ast.unaryop, ast.expr_context)):
            raise ExpressionError(f"{type(node).__name__} is outside the expression grammar in {text!r}")


def _check_tree(expr: sp.Expr, text: str) -> None:
    for node in sp.preorder_traversal(expr):
        if isinstance(node, sp.Symbol):
            if node not in (XI, S):
                raise ExpressionError(f"unknown name {node} in {text!r}")
        elif isinstance(node, sp.Pow):
            if not node.exp.is_Integer:
                raise ExpressionError(f"exponent {node.exp} is not an integer in {text!r}")
        elif isinstance(node, (sp.Add, sp.Mul, sp.Rational, sp.Float)):
            continue
        elif node.is_Number:
            continue
        else:
            raise ExpressionError(f"{type(node).__name__} is outside the expression grammar in {text!r}")


def parse_expression(text: str) -> sp.Expr:
    """Parse one right-hand side and enforce the grammar."""
    cleaned = text.replace("ξ", "xi").replace("·", "*").replace("−", "-").strip()
    _check_syntax(cleaned.replace("^", "**"), text)
    try:
        # evaluate=False keeps x**(1/2) visible to the grammar check
        expr = parse_expr(cleaned, local_dict=dict(_NAMES), transformations=_TRANSFORMATIONS, evaluate=False)
    except (SyntaxError, TypeError, NameError, AttributeError, ValueError) as e:
        raise ExpressionError(f"cannot parse {text!r}: {e}") from e
    if not isinstance(expr, sp.Expr):
        raise ExpressionError(f"not an arithmetic expression: {text!r}")
    _check_tree(expr, text)
    return expr.doit()


def _read_pairs(text: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ExpressionError(f"line {number}: expected 'key = expression', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN:
            raise ExpressionError(f"line {number}: unknown key {key!r} (expected one of {', '.join(_KNOWN)})")
        pairs[key] = value
    missing = [key for key in _REQUIRED if key not in pairs]
    if missing:
        raise ExpressionError(f"missing required keys: {', '.join(missing)}")
    if ("y" in pairs) != ("dy" in pairs):
        raise ExpressionError("y and dy must be given together")
    return pairs


def _number(text: str, what: str) -> float:
    expr = parse_expression(text)
    if expr.free_symbols:
        raise ExpressionError(f"{what} must be a number, got {text!r}")
    return float(expr)


def parse_family(text: str, name: str = "user") -> FamilySpec:
    pairs = _read_pairs(text)
    P = parse_expression(pairs["P"])
    if S in P.free_symbols:
        raise ExpressionError("P must not depend on s")
    Q = parse_expression(pairs["Q"])
    R = parse_expression(pairs["R"])

    bounds = [part for part in pairs["domain"].split(",") if part.strip()]
    if len(bounds) != 2:
        raise ExpressionError(f"domain must be 'a, b', got {pairs['domain']!r}")
    a, b = (_number(part, "domain bound") for part in bounds)
    if not a < b:
        raise ExpressionError(f"domain must satisfy a < b, got ({a}, {b})")
    base = _number(pairs["base"], "base") if "base" in pairs else a

    y = dy = None
    if "y" in pairs:
        y = sp.lambdify((S, XI), parse_expression(pairs["y"]), modules="math")
        dy = sp.lambdify((S, XI), parse_expression(pairs["dy"]), modules="math")

    logger.info(f"📄 Loaded family {pairs.get('name', name)!r}: P = {P}, Q = {Q}, R = {R}, domain ({a}, {b})")
    return FamilySpec(
        name=pairs.get("name", name),
        P=sp.lambdify(XI, P, modules="math"),
        dP=sp.lambdify(XI, sp.diff(P, XI), modules="math"),
        Q=sp.lambdify((S, XI), Q, modules="math"),
        R=sp.lambdify((S, XI), R, modules="math"),
        domain=(a, b),
        base_point=base,
        y=y,
        dy=dy,
    )


def load_family(path: Union[str, Path]) -> FamilySpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ExpressionError(f"cannot read expression file {path}: {e}") from e
    return parse_family(text, name=path.stem)
