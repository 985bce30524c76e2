"""
Tests for the numeric factorization engine
"""

import dataclasses
import math

import numpy as np
import pytest

from exact import DomainError
from factoengine import (
    FactorizationError,
    FamilySpec,
    QuadratureError,
    abns_degree_preset,
    build_coefficients,
    check_conditions,
    compare_with_exact,
    estimate_k,
    estimate_r,
    gegenbauer_param_preset,
    integrate,
)
from ladders import abns_lowering, abns_raising, gegenbauer_param_lowering, gegenbauer_param_raising


# ============================================================================
# QUADRATURE
# ============================================================================

def test_integrate_simple():
    assert integrate(lambda t: 0.0, 0, 1) == 0.0
    assert integrate(lambda t: 2 * t, 0, 1) == pytest.approx(1.0, abs=1e-10)
    assert integrate(lambda t: 2 * t, 1, 0) == pytest.approx(-1.0, abs=1e-10)


def test_integrate_log():
    value = integrate(lambda t: -2 * t / (1 + t * t), 0, 1, tol=1e-10)
    assert value == pytest.approx(-math.log(2), abs=1e-9)


def test_integrate_singularity():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: 1 / (t - 0.3) ** 2, 0, 1, tol=1e-10, budget=1000)
    assert 0 <= info.value.a < info.value.b <= 1


# ============================================================================
# ABNS DEGREE PRESET
# ============================================================================

@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("N", [1, 2])
def test_abns_closed_forms(n, N):
    spec = abns_degree_preset(N)
    ladder = build_coefficients(spec, n)
    xi = ladder.grid
    assert np.allclose(ladder.f_minus, 1.0, atol=1e-8)
    assert np.allclose(ladder.f_plus, 1 + xi * xi / N, atol=1e-8)
    assert np.allclose(ladder.g_minus, 0.0, atol=1e-6)
    assert np.allclose(ladder.g_plus, -2 * (1 + n / N) * xi, atol=1e-6)


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("N", [1, 2])
def test_abns_conditions_and_k(n, N):
    spec = abns_degree_preset(N)
    ladder = build_coefficients(spec, n)
    report = check_conditions(spec, ladder, n)
    assert report.worst < 1e-6
    k, deviation = estimate_k(spec, ladder, n)
    assert k == pytest.approx(-(n + 1) * (2 * N + n) / N, abs=1e-6)
    assert deviation < 1e-6


def test_abns_k_at_n2_n1():
    spec = abns_degree_preset(1)
    ladder = build_coefficients(spec, 2)
    assert ladder.k == pytest.approx(-12, abs=1e-6)


def test_first_condition_holds_to_rounding():
    spec = abns_degree_preset(3)
    ladder = build_coefficients(spec, 1)
    P = np.array([spec.P(t) for t in ladder.grid])
    assert np.max(np.abs(ladder.f_plus * ladder.f_minus - P) / P) < 1e-12


def test_abns_r_coefficients():
    spec = abns_degree_preset(1)
    ladder = build_coefficients(spec, 0)
    r_plus, r_minus, deviation = estimate_r(spec, ladder, 0)
    assert r_plus == pytest.approx(-1, abs=1e-6)
    assert r_minus == pytest.approx(2, abs=1e-6)
    assert deviation < 1e-6


def test_abns_matches_exact_operators():
    for n in (0, 1, 3):
        spec = abns_degree_preset(2)
        ladder = build_coefficients(spec, n)
        deviations = compare_with_exact(ladder, abns_raising(n, 2), abns_lowering())
        assert max(deviations.values()) < 1e-6


def test_abns_r_product_equals_k():
    spec = abns_degree_preset(5)
    ladder = build_coefficients(spec, 2)
    r_plus, r_minus, _ = estimate_r(spec, ladder, 2)
    assert r_plus * r_minus == pytest.approx(ladder.k, rel=1e-6)


# ============================================================================
# GEGENBAUER PARAMETER PRESET
# ============================================================================

def test_gegenbauer_closed_forms():
    n, alpha = 2, 2.0
    spec = gegenbauer_param_preset(n)
    ladder = build_coefficients(spec, alpha)
    x = ladder.grid
    assert np.allclose(ladder.f_plus, x, atol=1e-8)
    assert np.allclose(ladder.f_minus, x * (1 - x * x), atol=1e-8)
    assert np.allclose(ladder.g_plus, 2 * alpha + n, atol=1e-5)
    assert np.allclose(ladder.g_minus, -(2 * alpha + n + 1 - n * x * x), atol=1e-5)


def test_gegenbauer_matches_exact_operators():
    n, alpha = 3, 1.5
    spec = gegenbauer_param_preset(n)
    ladder = build_coefficients(spec, alpha)
    deviations = compare_with_exact(ladder, gegenbauer_param_raising(n, alpha),
                                    gegenbauer_param_lowering(n, alpha + 1))
    assert max(deviations.values()) < 1e-5


def test_gegenbauer_k():
    spec = gegenbauer_param_preset(1)
    ladder = build_coefficients(spec, 2)
    k, deviation = estimate_k(spec, ladder, 2)
    assert k == pytest.approx(-30, abs=1e-6)
    assert deviation < 1e-6


def test_gegenbauer_conditions():
    spec = gegenbauer_param_preset(2)
    ladder = build_coefficients(spec, 2)
    assert check_conditions(spec, ladder, 2).worst < 1e-6


def test_gegenbauer_r_plus_is_two_alpha():
    spec = gegenbauer_param_preset(1)
    ladder = build_coefficients(spec, 2)
    r_plus, r_minus, _ = estimate_r(spec, ladder, 2)
    assert r_plus == pytest.approx(4, abs=1e-6)
    assert r_plus * r_minus == pytest.approx(-30, abs=1e-5)


def test_corrupted_ladder_is_detected():
    spec = gegenbauer_param_preset(2)
    ladder = build_coefficients(spec, 2)
    corrupted = dataclasses.replace(ladder, g_plus=ladder.g_plus * 1.01, dg_plus=ladder.dg_plus * 1.01)
    assert check_conditions(spec, corrupted, 2).residuals["r_next"] > 1e-3


def test_without_constant_fit_k_is_not_constant():
    spec = gegenbauer_param_preset(2)
    ladder = build_coefficients(spec, 2, fit_constant=False)
    assert ladder.integration_constant == 0.0
    assert ladder.k_deviation > 1e-3


def test_tighter_tolerance_does_not_worsen_residuals():
    spec = gegenbauer_param_preset(2)
    loose = check_conditions(spec, build_coefficients(spec, 2, tol=1e-6), 2).worst
    tight = check_conditions(spec, build_coefficients(spec, 2, tol=1e-10), 2).worst
    assert tight <= loose + 1e-9


# ============================================================================
# FAILURES
# ============================================================================

def test_nonpositive_P_is_rejected():
    spec = FamilySpec(
        name="bad",
        P=lambda t: t - 0.5,
        Q=lambda s, t: 0.0,
        R=lambda s, t: s,
        domain=(0.0, 1.0),
    )
    with pytest.raises(FactorizationError) as info:
        build_coefficients(spec, 0)
    assert isinstance(info.value, DomainError)


def test_r_needs_solutions():
    spec = FamilySpec(
        name="hermite",
        P=lambda t: 1.0,
        Q=lambda s, t: -2 * t,
        R=lambda s, t: 2 * s,
        domain=(0.1, 2.0),
    )
    ladder = build_coefficients(spec, 1)
    assert ladder.k == pytest.approx(-4, abs=1e-6)
    with pytest.raises(FactorizationError):
        estimate_r(spec, ladder, 1)
