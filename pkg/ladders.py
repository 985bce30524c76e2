"""
First-order ladder operators f·d/dξ + g with exact polynomial coefficients

Holds the concrete operators of the degree ladder (ABNS), the parameter
ladder (Gegenbauer) and the recurrence-shift ladder (ABNS in N), together
with the r-coefficients that go with them.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from exact import DomainError, Poly, Scalar, T, format_rational


@dataclass(frozen=True)
class LadderOp:
    """A = f·d/dξ + g."""

    f: Poly
    g: Poly

    def apply(self, p: Poly) -> Poly:
        return self.f * p.derivative() + self.g * p

    __call__ = apply

    def then(self, other: "LadderOp") -> "ComposedOp":
        """Apply self first, then other."""
        return ComposedOp((self, other))


@dataclass(frozen=True)
class ComposedOp:
    steps: Tuple[LadderOp, ...]

    def apply(self, p: Poly) -> Poly:
        for op in self.steps:
            p = op.apply(p)
        return p

    __call__ = apply

    def then(self, other: LadderOp) -> "ComposedOp":
        return ComposedOp(self.steps + (other,))


def apply_ladder(op: LadderOp, p: Poly) -> Poly:
    return op.apply(p)


def _positive(name: str, value: Scalar) -> Fraction:
    value = Fraction(value)
    if value <= 0:
        raise DomainError(f"{name} must be > 0, got {format_rational(value)}")
    return value


# ============================================================================
# DEGREE LADDER (ABNS, s = n)
# ============================================================================

def abns_raising(n: int, N: Scalar) -> LadderOp:
    """A_n^+ = (1 + ξ²/N) d/dξ − 2(1 + n/N) ξ."""
    N = _positive("N", N)
    return LadderOp(f=1 + T * T * (1 / N), g=T * (-2 * (1 + Fraction(n) / N)))


def abns_lowering() -> LadderOp:
    """A_n^- = d/dξ."""
    return LadderOp(f=Poly.constant(1), g=Poly())


def degree_k(n: int, N: Scalar) -> Fraction:
    """k_n = −R_{n+1} = −(n+1)(2N+n)/N."""
    N = _positive("N", N)
    return -Fraction((n + 1)) * (2 * N + n) / N


def degree_r_pair(n: int, N: Scalar, pair: str = "i") -> Tuple[Fraction, Fraction]:
    """
    (r_n^+, r_{n+1}^-) for one of the two retained pairs.

    Pair "i" is the one that reproduces F_0 = 1, F_1 = 2ξ unscaled; pair "ii"
    moves the factor n+1 into the raising side, which divides F_n by n!.
    """
    N = _positive("N", N)
    if pair == "i":
        return Fraction(-1), Fraction(n + 1) * (2 * N + n) / N
    if pair == "ii":
        return Fraction(-(n + 1)), (2 * N + n) / N
    raise DomainError(f"unknown r-pair {pair!r} (expected 'i' or 'ii')")


# ============================================================================
# PARAMETER LADDER (Gegenbauer, s = α)
# ============================================================================

def gegenbauer_param_raising(n: int, alpha: Scalar) -> LadderOp:
    """x d/dx + (2α + n)."""
    alpha = Fraction(alpha)
    return LadderOp(f=T, g=Poly.constant(2 * alpha + n))


def gegenbauer_param_lowering(n: int, alpha: Scalar) -> LadderOp:
    """x(1 − x²) d/dx − (2α + n − 1 − n x²)."""
    alpha = Fraction(alpha)
    return LadderOp(f=T - T ** 3, g=T * T * n - (2 * alpha + n - 1))


def param_r_plus(alpha: Scalar) -> Fraction:
    """r_α^+ = 2α (chosen, not read off the k-factors)."""
    return 2 * Fraction(alpha)


def param_r_minus(n: int, alpha: Scalar) -> Fraction:
    """Scalar in front of C_n^{α−1}: −(2α+n−1)(2α+n−2)/(2α−2)."""
    alpha = Fraction(alpha)
    if alpha == 1:
        raise DomainError("the parameter down-ladder is undefined at alpha = 1 (denominator 2α − 2)")
    return -(2 * alpha + n - 1) * (2 * alpha + n - 2) / (2 * alpha - 2)


def param_k(n: int, alpha: Scalar) -> Fraction:
    """k_α = −(2α+n+1)(2α+n)."""
    alpha = Fraction(alpha)
    return -(2 * alpha + n + 1) * (2 * alpha + n)


# ============================================================================
# RECURRENCE-SHIFT LADDER (ABNS, s = N, argument rescaled by √(1 ± 1/N))
# ============================================================================

def abns_shift_raising(n: int, N: Scalar) -> LadderOp:
    """ξ(1 + ξ²/N) d/dξ − (n/N) ξ² + 2N + n."""
    N = _positive("N", N)
    return LadderOp(f=T + T ** 3 * (1 / N), g=T * T * (-Fraction(n) / N) + (2 * N + n))


def abns_shift_lowering(n: int, N: Scalar) -> LadderOp:
    """ξ d/dξ − (2N + n − 1)."""
    N = _positive("N", N)
    return LadderOp(f=T, g=Poly.constant(-(2 * N + n - 1)))


def shift_r_plus(N: Scalar) -> Fraction:
    return 2 * _positive("N", N)


def shift_r_minus(n: int, N: Scalar) -> Fraction:
    """−(2N+n−1)(2N+n−2)/(2N−2); needs N > 1 so that F_n^{N−1} exists."""
    N = Fraction(N)
    if N <= 1:
        raise DomainError(f"the shift down-ladder needs N > 1, got {format_rational(N)}")
    return -(2 * N + n - 1) * (2 * N + n - 2) / (2 * N - 2)
