"""
Tests for user family expression files
"""

import pytest

from exprfile import ExpressionError, load_family, parse_expression, parse_family
from factoengine import build_coefficients, check_conditions, estimate_r

HERMITE = """
# Hermite: y'' - 2 xi y' + 2 s y = 0
name = hermite
P = 1
Q = -2*xi
R = 2*s
domain = 0.1, 2
base = 0
"""


def test_hermite_family_k():
    spec = parse_family(HERMITE)
    assert spec.name == "hermite"
    assert spec.domain == (0.1, 2.0)
    ladder = build_coefficients(spec, 1)
    assert ladder.k == pytest.approx(-4, abs=1e-6)
    assert check_conditions(spec, ladder, 1).worst < 1e-6


def test_hermite_family_r_plus():
    text = HERMITE + "y = 1 + s*(2*xi - 1)\ndy = 2*s\n"
    spec = parse_family(text)
    ladder = build_coefficients(spec, 0)
    r_plus, r_minus, _ = estimate_r(spec, ladder, 0)
    assert r_plus == pytest.approx(-1, abs=1e-6)
    assert r_minus == pytest.approx(2, abs=1e-6)


def test_alternative_spellings():
    spec = parse_family("P = 1 + x^2/3\nQ = −2·ξ\nR = s^2\ndomain = 0, 1\n")
    assert spec.P(1.5) == pytest.approx(1.75)
    assert spec.dP(1.5) == pytest.approx(1.0)
    assert spec.Q(0, 2.0) == pytest.approx(-4.0)
    assert spec.R(3, 0.0) == pytest.approx(9.0)
    # base defaults to the left end of the domain
    assert spec.base_point == 0.0


def test_load_from_file(tmp_path):
    path = tmp_path / "hermite.family"
    path.write_text(HERMITE.replace("name = hermite\n", ""), encoding="utf-8")
    spec = load_family(path)
    assert spec.name == "hermite"


def test_missing_file(tmp_path):
    with pytest.raises(ExpressionError):
        load_family(tmp_path / "nope.family")


@pytest.mark.parametrize("text", [
    "sin(xi)",
    "xi^(1/2)",
    "xi**0.5",
    "z + 1",
    "__import__('os')",
    "lambda: 1",
    "xi if s else 1",
    "xi & 1",
    "xi +",
])
def test_rejected_expressions(text):
    with pytest.raises(ExpressionError):
        parse_expression(text)


@pytest.mark.parametrize("text", [
    "P = 1\nQ = xi\nR = s\n",
    "P = 1\nQ = xi\nR = s\ndomain = 1\n",
    "P = 1\nQ = xi\nR = s\ndomain = 2, 1\n",
    "P = 1 + s\nQ = xi\nR = s\ndomain = 0, 1\n",
    "P = 1\nQ = xi\nR = s\ndomain = 0, 1\ny = xi\n",
    "P = 1\nQ = xi\nR = s\ndomain = 0, 1\nW = 3\n",
    "P = 1\nQ = xi\nR = s\ndomain = 0, 1\nthis line has no equals sign\n",
])
def test_rejected_files(text):
    with pytest.raises(ExpressionError):
        parse_family(text)


@pytest.mark.parametrize("call", ["open({target!r}, 'w')", "xi + open({target!r}, 'w').close() + 1"])
def test_builtin_call_is_rejected_without_running(tmp_path, call):
    target = str(tmp_path / "created.txt")
    with pytest.raises(ExpressionError):
        parse_expression(call.format(target=target))
    assert not (tmp_path / "created.txt").exists()
