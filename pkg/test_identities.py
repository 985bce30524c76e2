"""
Tests for the exact identity checks and suite runner
"""

from fractions import Fraction

import pytest

import identities
from exact import DomainError, Poly, T
from families import abns, hermite
from identities import (
    FAIL,
    PASS,
    SKIPPED,
    commuting_path_check,
    composition_check,
    degree_ladder_check,
    nagel_check,
    ode_check,
    ode_residual,
    param_composition_check,
    param_ladder_check,
    reverse_composition_check,
    run_suite,
    shift_check,
)
from ladders import LadderOp, abns_raising, apply_ladder, gegenbauer_param_raising

N_GRID = [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5), Fraction(10), Fraction(137)]
ALPHA_GRID = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5), Fraction(10)]


# ============================================================================
# LADDER APPLICATION
# ============================================================================

def test_pure_derivative_ladder():
    assert apply_ladder(LadderOp(Poly.constant(1), Poly()), T * 2) == Poly.constant(2)


def test_raising_f1_gives_minus_f2():
    assert apply_ladder(abns_raising(1, 1), T * 2) == -(T * T * 6 - 2)


def test_param_raising_on_constant():
    alpha = Fraction(7, 3)
    assert apply_ladder(gegenbauer_param_raising(0, alpha), Poly.constant(1)) == Poly.constant(2 * alpha)


# ============================================================================
# SINGLE CHECKS
# ============================================================================

@pytest.mark.parametrize("N", N_GRID)
def test_degree_ladder_seeds(N):
    assert degree_ladder_check(0, N, "up").holds
    assert degree_ladder_check(1, N, "down").holds


def test_degree_ladder_down_at_n2():
    report = degree_ladder_check(2, 1, "down")
    assert report.status == PASS
    assert report.difference.is_zero()


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_param_ladder_low_degrees(alpha):
    assert param_ladder_check(0, alpha, "up").holds
    assert param_ladder_check(1, alpha, "up").holds


def test_param_ladder_down_at_n0():
    assert param_ladder_check(0, Fraction(3), "down").holds


def test_param_ladder_down_undefined_at_alpha_1():
    with pytest.raises(DomainError):
        param_ladder_check(2, 1, "down")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_nagel_low_degrees(n):
    assert nagel_check(n, 1).holds
    assert nagel_check(n, Fraction(7, 2)).holds


@pytest.mark.parametrize("N", [Fraction(3, 2), Fraction(2), Fraction(10)])
def test_shift_low_degrees(N):
    assert shift_check(0, N, "up").holds
    assert shift_check(1, N, "up").holds
    assert shift_check(1, N, "down").holds


def test_shift_down_needs_n_above_one():
    with pytest.raises(DomainError):
        shift_check(1, 1, "down")


def test_bad_direction():
    with pytest.raises(DomainError):
        degree_ladder_check(1, 1, "sideways")


def test_ode_residuals():
    assert ode_residual(Poly.constant(1), 0, 5).is_zero()
    assert ode_residual(T * T * 6 - 2, 2, 1).is_zero()
    # Hermite is not an ABNS solution at finite N
    assert ode_residual(hermite(2), 2, 1) == Poly.constant(-4)


def test_ode_unknown_family():
    with pytest.raises(DomainError):
        ode_residual(Poly.constant(1), 0, 1, which="laguerre")


@pytest.mark.parametrize("n", range(0, 21))
def test_compositions(n):
    for N in N_GRID:
        assert composition_check(n, N).holds
        assert reverse_composition_check(n, N).holds
        assert commuting_path_check(n, N).holds
    for alpha in ALPHA_GRID:
        assert param_composition_check(n, alpha).holds


def test_odes_hold_on_grid():
    for n in range(16):
        for N in N_GRID:
            assert ode_check(n, N, "abns").holds
        for alpha in ALPHA_GRID:
            assert ode_check(n, alpha, "gegenbauer").holds


def test_second_pair_ladder():
    for n in range(10):
        assert degree_ladder_check(n, 3, "up", pair="ii").holds
        if n:
            assert degree_ladder_check(n, 3, "down", pair="ii").holds


# ============================================================================
# SUITES
# ============================================================================

def test_full_grid_has_no_failures():
    reports = run_suite("all", 30, N_GRID, ALPHA_GRID)
    assert not [r for r in reports if r.status == FAIL]
    skipped = {(r.identity, r.direction, r.parameter) for r in reports if r.status == SKIPPED}
    assert skipped == {("shift", "down", Fraction(1)), ("param", "down", Fraction(1))}
    assert all(r.reason.startswith("out of domain") for r in reports if r.status == SKIPPED)


def test_suite_report_is_sorted():
    reports = run_suite("degree", 4, [1, 2], [])
    assert reports == sorted(reports, key=lambda r: r.sort_key())
    assert {r.identity for r in reports} == {"degree"}


def test_mixed_suite_is_ordered_by_degree_then_parameter():
    reports = run_suite("all", 3, [Fraction(2), Fraction(1)], [Fraction(2), Fraction(1, 2)])
    keys = [(r.n, r.parameter) for r in reports]
    assert keys == sorted(keys)
    assert len({r.identity for r in reports}) > 1


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_suite("everything", 3, [1], [1])


def test_parallel_run_matches_serial():
    serial = run_suite("shift", 6, [2, 5], [])
    parallel = run_suite("shift", 6, [2, 5], [], workers=2)
    assert serial == parallel


def test_injected_generator_bug_is_reported(monkeypatch):
    original = identities.abns

    def broken(n, N, pair="i"):
        p = original(n, N, pair)
        return p + 1 if n == 2 else p

    monkeypatch.setattr(identities, "abns", broken)
    reports = run_suite("degree", 3, [1], [])
    failed = [r for r in reports if r.status == FAIL]
    assert failed
    assert all(2 in (r.n, r.n + 1, r.n - 1) for r in failed)
    assert not failed[0].difference.is_zero()


def test_report_record():
    record = degree_ladder_check(0, Fraction(3, 2), "up").to_record()
    assert record["parameter"] == "3/2"
    assert record["status"] == "pass"
    assert record["residual"] == []


def test_reference_families_are_untouched():
    assert abns(2, 1) == T * T * 6 - 2
