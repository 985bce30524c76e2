"""
Exact generators for the ABNS, Gegenbauer and Hermite families

    abns(n, N)         F_n^N(ξ_N), built with the degree up-ladder
    gegenbauer(n, a)   C_n^a(x), classical three-term recurrence
    hermite(n)         physicists' H_n(ξ), the N → ∞ reference
    unball(p, n)       (1+u²)^{n/2} p(u/√(1+u²)) as an exact polynomial in u

N is any positive rational. The ABNS oscillator only gives it a meaning for
positive integers, but every coefficient is rational in N, so the families
continue to rational N unchanged.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache

from exact import DomainError, Poly, Scalar, T, check_parity, coefficient_distance, format_rational
from ladders import abns_raising

logger = logging.getLogger(__name__)


def _check_degree(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")


@lru_cache(maxsize=256)
def _abns(n: int, N: Fraction) -> Poly:
    poly = Poly.constant(1)
    if n >= 1:
        poly = T * 2
    # F_{k+1} = −A_k^+ F_k, i.e. r^+ = −1
    for k in range(1, n):
        poly = -abns_raising(k, N).apply(poly)
    return poly


def abns(n: int, N: Scalar, pair: str = "i") -> Poly:
    """
    ABNS function F_n^N in the variable ξ_N.

    pair="ii" returns the family of the second retained r-pair
    (r_n^+ = −(n+1)), which is F_n^N / n!.
    """
    _check_degree(n)
    N = Fraction(N)
    if N <= 0:
        raise DomainError(f"N must be > 0, got {format_rational(N)}")
    poly = _abns(n, N)
    if pair == "i":
        return poly
    if pair == "ii":
        return poly * Fraction(1, math.factorial(n))
    raise DomainError(f"unknown r-pair {pair!r} (expected 'i' or 'ii')")


@lru_cache(maxsize=256)
def _gegenbauer(n: int, alpha: Fraction) -> Poly:
    previous, current = Poly(), Poly.constant(1)
    if n >= 1:
        previous, current = current, T * (2 * alpha)
    # k C_k = 2x(k+α−1) C_{k−1} − (k+2α−2) C_{k−2}
    for k in range(2, n + 1):
        previous, current = current, (T * (2 * (k + alpha - 1)) * current
                                      - previous * (k + 2 * alpha - 2)) * Fraction(1, k)
    return current


def gegenbauer(n: int, alpha: Scalar) -> Poly:
    """Gegenbauer polynomial C_n^alpha(x); any rational alpha."""
    _check_degree(n)
    return _gegenbauer(n, Fraction(alpha))


@lru_cache(maxsize=256)
def hermite(n: int) -> Poly:
    """Physicists' Hermite H_n: H_{n+1} = 2ξH_n − 2nH_{n−1}."""
    _check_degree(n)
    previous, current = Poly(), Poly.constant(1)
    for k in range(n):
        previous, current = current, T * 2 * current - previous * (2 * k)
    return current


def unball(p: Poly, n: int) -> Poly:
    """
    Σ b_k u^k (1+u²)^{(n−k)/2} for p = Σ b_k x^k of parity n.

    This is (1+u²)^{n/2}·p(u/√(1+u²)); parity makes every (n−k)/2 an integer.
    """
    check_parity(p, n, "unball input")
    if p.degree > n:
        raise DomainError(f"unball needs degree ≤ {n}, got degree {p.degree}")
    one_plus_u2 = 1 + T * T
    result = Poly()
    for k, b in enumerate(p.coeffs):
        if b:
            result = result + Poly.monomial(k, b) * one_plus_u2 ** ((n - k) // 2)
    return result


def hermite_distance(n: int, N: Scalar) -> Fraction:
    """‖coeffs(F_n^N) − coeffs(H_n)‖∞."""
    return coefficient_distance(abns(n, N), hermite(n))
