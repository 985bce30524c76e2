"""
Tests for exact rational / polynomial arithmetic
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exact import (
    DomainError,
    ParityError,
    Poly,
    T,
    add,
    differentiate,
    evaluate,
    format_rational,
    gcd,
    multiply,
    parse_rational,
    scale,
    scaled_compose,
    squarefree_part,
    subtract,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)
nonzero_rationals = rationals.filter(lambda q: q != 0)
positive_rationals = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=40)
polys = st.lists(rationals, max_size=8).map(lambda c: Poly(tuple(c)))


@st.composite
def parity_polys(draw):
    parity = draw(st.integers(0, 7))
    coeffs = draw(st.lists(rationals, min_size=parity + 1, max_size=parity + 1))
    return Poly(tuple(c if (k - parity) % 2 == 0 else 0 for k, c in enumerate(coeffs))), parity


def test_zero_polynomial_is_canonical():
    assert Poly((0, 0, 0)) == Poly()
    assert Poly((0, 0)).coeffs == ()
    assert Poly().degree == -1
    assert add(Poly.constant(1), Poly.constant(-1)) == Poly()
    assert subtract(T * 3, T * 3).is_zero()


def test_monomial_product():
    assert multiply(T * 2, T * 2) == Poly((0, 0, 4))


def test_scalar_multiply_of_f2_at_n_equal_1():
    N = Fraction(1)
    f2 = T * T * (4 * (1 + 1 / (2 * N))) - 2
    assert scale(f2, Fraction(1, 2)) == Poly((-1, 0, 3))


@pytest.mark.parametrize("p, expected", [
    (Poly.constant(1), Poly()),
    (T * 2, Poly.constant(2)),
    (T * T * 6 - 2, T * 12),
])
def test_differentiate(p, expected):
    assert differentiate(p) == expected


@pytest.mark.parametrize("p, x, expected", [
    (T * 2, 3, 6),
    (T * T * 6 - 2, 0, -2),
    (T * T * 6 - 2, Fraction(1, 3), Fraction(-4, 3)),
])
def test_evaluate(p, x, expected):
    assert evaluate(p, x) == expected


@pytest.mark.parametrize("p, c, parity, expected", [
    (T * 2, 4, 1, T * 8),
    (T * T, 9, 2, T * T * 81),
    (T * T * 6 - 2, Fraction(1, 2), 2, T * T * Fraction(3, 2) - 1),
])
def test_scaled_compose(p, c, parity, expected):
    assert scaled_compose(p, c, parity) == expected


def test_scaled_compose_rejects_mixed_parity():
    with pytest.raises(ParityError):
        scaled_compose(T + 1, 2, 1)


@pytest.mark.parametrize("c", [0, -1, Fraction(-1, 3)])
def test_scaled_compose_rejects_nonpositive_scale(c):
    with pytest.raises(DomainError):
        scaled_compose(T * 2, c, 1)


def test_parse_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(" 7 / 14 ") == Fraction(1, 2)
    assert parse_rational("1e-9", allow_decimal=True) == Fraction(1, 10**9)
    with pytest.raises(DomainError):
        parse_rational("1.5")
    with pytest.raises(DomainError):
        parse_rational("abc", allow_decimal=True)


def test_format_rational():
    assert format_rational(Fraction(-4, 3)) == "-4/3"
    assert format_rational(Fraction(6, 3)) == "2"


def test_strings_round_trip():
    p = T * T * Fraction(-4, 3) + Fraction(1, 7)
    assert Poly.from_strings(p.to_strings()) == p


def test_squarefree_part_and_gcd():
    p = (T - 1) * (T - 1) * (T + 2)
    assert gcd(p, p.derivative()) == T - 1
    assert squarefree_part(p) == (T - 1) * (T + 2)


@given(nonzero_rationals)
def test_rational_normalization(q):
    product = q * (1 / q)
    assert product == 1
    assert product.denominator == 1


@given(polys, polys)
def test_product_degree_adds(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert (a * b).degree == a.degree + b.degree


@given(polys, polys)
def test_sum_degree_bounded(a, b):
    assert (a + b).degree <= max(a.degree, b.degree)


@given(polys, polys, rationals, rationals)
def test_differentiate_is_linear(p, q, alpha, beta):
    assert differentiate(p * alpha + q * beta) == differentiate(p) * alpha + differentiate(q) * beta


@given(polys, polys.filter(lambda q: not q.is_zero()))
def test_division_identity(a, b):
    quotient, remainder = divmod(a, b)
    assert quotient * b + remainder == a
    assert remainder.degree < b.degree


@given(parity_polys())
def test_scaled_compose_identity_scale(case):
    p, parity = case
    assert scaled_compose(p, 1, parity) == p


@given(parity_polys(), positive_rationals)
def test_scaled_compose_round_trip(case, c):
    p, parity = case
    assert scaled_compose(scaled_compose(p, c, parity), 1 / c, parity) == p
