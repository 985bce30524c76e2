"""
Real zeros of ABNS and Gegenbauer polynomials

Isolation uses Sturm sequences evaluated over exact rationals, so root
counts are certificates. Isolating intervals are then shrunk by rational
bisection. Zeros of C_n^N are carried to zeros of F_n^N through
ξ = √N·t/√(1−t²), with the square roots enclosed between rationals.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from exact import AbnsError, DomainError, Poly, Scalar, format_rational, squarefree_part
from families import abns, gegenbauer

logger = logging.getLogger(__name__)

Interval = Tuple[Fraction, Fraction]


class RootCountError(AbnsError):
    """A root count or location contradicts what the theory guarantees."""


@dataclass(frozen=True)
class RootList:
    """
    Sorted, pairwise disjoint intervals, one simple real root in each.

    An exact rational root is stored as a degenerate interval (r, r).
    """

    intervals: Tuple[Interval, ...]
    tol: Optional[Fraction] = None

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def midpoints(self) -> List[Fraction]:
        return [(lo + hi) / 2 for lo, hi in self.intervals]

    def as_floats(self) -> List[float]:
        return [float(m) for m in self.midpoints]


# ============================================================================
# STURM SEQUENCES
# ============================================================================

def sturm_sequence(p: Poly) -> List[Poly]:
    """p, p′, −rem(p, p′), …; each member is divided by |leading coefficient|."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no Sturm sequence")

    def normalized(q: Poly) -> Poly:
        return q * (1 / abs(q.leading))

    sequence = [normalized(p)]
    derivative = p.derivative()
    if derivative.is_zero():
        return sequence
    sequence.append(normalized(derivative))
    while True:
        remainder = -(sequence[-2] % sequence[-1])
        if remainder.is_zero():
            return sequence
        sequence.append(normalized(remainder))


def sign_changes(sequence: Sequence[Poly], x: Scalar) -> int:
    signs = [v > 0 for v in (q(x) for q in sequence) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(sequence: Sequence[Poly], a: Scalar, b: Scalar) -> int:
    """Number of distinct real roots in (a, b]."""
    return sign_changes(sequence, a) - sign_changes(sequence, b)


def cauchy_bound(p: Poly) -> Fraction:
    """Every root satisfies |x| < 1 + max |a_k / a_n|."""
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


# ============================================================================
# ISOLATION AND REFINEMENT
# ============================================================================

def isolate_roots(p: Poly) -> RootList:
    """Isolating intervals for all distinct real roots of p."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no isolated roots")
    core = squarefree_part(p)
    if core.degree < 1:
        return RootList(())
    sequence = sturm_sequence(core)
    bound = cauchy_bound(core)

    found: List[Interval] = []
    pending = [(-bound, bound, count_roots(sequence, -bound, bound))]
    while pending:
        lo, hi, count = pending.pop()
        if count == 0:
            continue
        if count == 1:
            found.append((hi, hi) if core(hi) == 0 else (lo, hi))
            continue
        mid = (lo + hi) / 2
        left = count_roots(sequence, lo, mid)
        pending.append((lo, mid, left))
        pending.append((mid, hi, count - left))
    found.sort()
    logger.debug(f"Isolated {len(found)} real roots of a degree-{p.degree} polynomial (bound {float(bound):.4g})")
    return RootList(tuple(found))


def refine(p: Poly, interval: Interval, tol: Fraction) -> Interval:
    """
    Shrink an isolating interval of a squarefree p to width ≤ tol.

    The root is inside (lo, hi] and p(hi) ≠ 0, so a sign comparison against
    p(hi) decides each halving.
    """
    lo, hi = interval
    if lo == hi:
        return interval
    sign_hi = p(hi) > 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        value = p(mid)
        if value == 0:
            return mid, mid
        if (value > 0) != sign_hi:
            lo = mid
        else:
            hi = mid
    return lo, hi


def refine_roots(p: Poly, roots: RootList, tol: Scalar) -> RootList:
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {format_rational(tol)}")
    core = squarefree_part(p)
    return RootList(tuple(refine(core, interval, tol) for interval in roots.intervals), tol)


def real_roots(p: Poly, tol: Scalar) -> RootList:
    return refine_roots(p, isolate_roots(p), tol)


def abns_zeros(n: int, N: Scalar, tol: Scalar) -> RootList:
    """All n zeros of F_n^N, refined to width ≤ tol. Fewer than n real roots is a hard failure."""
    if n < 1:
        raise DomainError(f"abns_zeros needs n ≥ 1, got {n}")
    p = abns(n, N)
    roots = isolate_roots(p)
    if len(roots) != n:
        raise RootCountError(f"F_{n}^N with N={format_rational(Fraction(N))} has {len(roots)} real roots, expected {n}")
    return refine_roots(p, roots, tol)


# ============================================================================
# GEGENBAUER ZEROS CARRIED TO ABNS ZEROS
# ============================================================================

def _sqrt_bounds(q: Fraction, bits: int) -> Interval:
    """Rationals lo ≤ √q ≤ hi with hi − lo ≤ 2^-bits."""
    scaled = q * 4 ** bits
    floor_value = scaled.numerator // scaled.denominator
    low = math.isqrt(floor_value)
    ceil_value = -((-scaled.numerator) // scaled.denominator)
    high = math.isqrt(ceil_value)
    if high * high < ceil_value:
        high += 1
    return Fraction(low, 2 ** bits), Fraction(high, 2 ** bits)


def _map_bounds(t: Fraction, N: Fraction, bits: int) -> Interval:
    """Enclosure of √N·t/√(1−t²)."""
    if t == 0:
        return Fraction(0), Fraction(0)
    lo, hi = _sqrt_bounds(N / (1 - t * t), bits)
    return (t * lo, t * hi) if t > 0 else (t * hi, t * lo)


def map_to_abns(interval: Interval, N: Fraction, bits: int) -> Interval:
    lo, hi = interval
    # the map is increasing on (−1, 1)
    return _map_bounds(lo, N, bits)[0], _map_bounds(hi, N, bits)[1]


def mapped_gegenbauer_zeros(n: int, N: Scalar, tol: Scalar) -> RootList:
    """Zeros of C_n^N in (−1, 1) carried to ξ = √N·t/√(1−t²), enclosed to width ≤ tol."""
    if n < 1:
        raise DomainError(f"mapped_gegenbauer_zeros needs n ≥ 1, got {n}")
    N = Fraction(N)
    if N <= 0:
        raise DomainError(f"N must be > 0, got {format_rational(N)}")
    tol = Fraction(tol)
    p = gegenbauer(n, N)
    core = squarefree_part(p)
    roots = isolate_roots(p)
    if len(roots) != n:
        raise RootCountError(f"C_{n}^{format_rational(N)} has {len(roots)} real roots, expected {n}")

    bits = max(8, math.ceil(math.log2(1 / tol)) + 8)
    mapped: List[Interval] = []
    for interval in roots.intervals:
        width = tol
        while True:
            interval = refine(core, interval, width)
            lo, hi = interval
            if lo <= -1 or hi >= 1:
                raise RootCountError(f"Gegenbauer zero outside (−1, 1): [{float(lo)}, {float(hi)}]")
            image = map_to_abns(interval, N, bits)
            if image[1] - image[0] <= tol:
                break
            width /= 2
            bits += 1
        mapped.append(image)
    return RootList(tuple(mapped), tol)


def roots_agree(a: RootList, b: RootList, within: Scalar) -> bool:
    """Same count, and midpoints pairwise within `within`."""
    within = Fraction(within)
    return len(a) == len(b) and all(abs(x - y) <= within for x, y in zip(a.midpoints, b.midpoints))


# ============================================================================
# EMPIRICAL STUDIES
# ============================================================================

def largest_root(n: int, N: Scalar, tol: Scalar) -> Fraction:
    return abns_zeros(n, N, tol).midpoints[-1]


def interlacing_check(n: int, N: Scalar, tol: Scalar) -> bool:
    """
    Whether the zeros of F_n^N and F_{n+1}^N strictly interlace.

    Only an observation for the given (n, N); nothing general is claimed.
    """
    inner = abns_zeros(n, N, tol).intervals
    outer = abns_zeros(n + 1, N, tol).intervals
    for i, (lo, hi) in enumerate(inner):
        if not (outer[i][1] < lo and hi < outer[i + 1][0]):
            return False
    return True
