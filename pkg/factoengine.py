"""
Numeric factorization engine

Given a family P(ξ) y_s″ + Q_s(ξ) y_s′ + R_s(ξ) y_s = 0 and a grid, builds
the ladder coefficients

    E_s      = exp(½ ∫ (Q_{s+1} − Q_s)/P)
    f_{s+1}^- = √P E_s,            f_s^+ = √P / E_s
    W_s      = (Q_{s+1} + Q_s − P′) / (2√P)
    g_{s+1}^- = (E_s/2)  [W_s + ∫ (ΔR/√P − W_s ΔQ/(2P)) + c]
    g_s^+     = 1/(2E_s) [W_s − ∫ (ΔR/√P − W_s ΔQ/(2P)) − c]

with every antiderivative anchored at the family's base point, checks the
five sufficiency conditions and estimates the k-constant and r^+.

The constant c is fitted so that k_s comes out ξ-independent. k depends on c
only through c·(f^+ E′/2 − I/2) − c²/4, so the spread of k over the grid is
minimized by ordinary least squares in c.

Presets:
    abns-degree        s = n, parameter N, variable ξ_N
    gegenbauer-param   s = α, fixed degree n, variable x
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

import config
from exact import AbnsError, DomainError, Poly
from families import abns, gegenbauer
from ladders import LadderOp

logger = logging.getLogger(__name__)

Evaluator = Callable[[float], float]
FamilyEvaluator = Callable[[float, float], float]


class FactorizationError(AbnsError):
    """The engine could not produce a ladder on the requested grid."""


class NonPositivePError(FactorizationError, DomainError):
    """P vanishes or turns negative on the grid: the interval is outside the family's domain."""


class QuadratureError(FactorizationError):
    """Adaptive quadrature did not converge; carries the offending sub-interval."""

    def __init__(self, message: str, a: float, b: float):
        super().__init__(f"{message} on [{a:.12g}, {b:.12g}]")
        self.a = a
        self.b = b


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class FamilySpec:
    name: str
    P: Evaluator
    Q: FamilyEvaluator
    R: FamilyEvaluator
    domain: Tuple[float, float]
    base_point: float = 0.0
    y: Optional[FamilyEvaluator] = None
    dy: Optional[FamilyEvaluator] = None
    dP: Optional[Evaluator] = None
    variable: str = "xi"


@dataclass(frozen=True, eq=False)
class NumericLadder:
    """Per-grid-point ladder coefficients for the step s → s+1."""

    s: float
    grid: np.ndarray
    E: np.ndarray
    W: np.ndarray
    f_plus: np.ndarray
    f_minus: np.ndarray
    g_plus: np.ndarray
    g_minus: np.ndarray
    df_plus: np.ndarray
    df_minus: np.ndarray
    dg_plus: np.ndarray
    dg_minus: np.ndarray
    integration_constant: float
    k: float
    k_deviation: float

    def to_records(self) -> list:
        columns = ("grid", "E", "W", "f_plus", "f_minus", "g_plus", "g_minus")
        return [{name: float(getattr(self, name)[i]) for name in columns} for i in range(len(self.grid))]


@dataclass(frozen=True)
class ConditionReport:
    """Max absolute residual of each sufficiency condition over the grid."""

    residuals: Dict[str, float]
    k: float

    @property
    def worst(self) -> float:
        return max(self.residuals.values())


# ============================================================================
# QUADRATURE
# ============================================================================

def integrate(fn: Evaluator, a: float, b: float, tol: Optional[float] = None,
              budget: Optional[int] = None) -> float:
    """
    Adaptive Simpson with absolute tolerance tol.

    Raises QuadratureError when the evaluation budget runs out or an interval
    can no longer be halved in floating point, which in practice means a
    singularity inside [a, b].
    """
    tol = config.QUAD_TOL if tol is None else tol
    budget = config.QUAD_BUDGET if budget is None else budget
    if a == b:
        return 0.0
    if a > b:
        return -integrate(fn, b, a, tol, budget)

    evaluations = 0

    def f(t: float) -> float:
        nonlocal evaluations
        evaluations += 1
        try:
            value = fn(t)
        except ZeroDivisionError:
            value = math.nan
        if not math.isfinite(value):
            raise QuadratureError(f"integrand is not finite at {t:.12g}", a, b)
        return value

    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol)]
    while stack:
        lo, hi, flo, fmid, fhi, estimate, local_tol = stack.pop()
        mid = (lo + hi) / 2
        left_mid, right_mid = (lo + mid) / 2, (mid + hi) / 2
        if not (lo < left_mid < mid < right_mid < hi):
            raise QuadratureError("interval can no longer be subdivided", lo, hi)
        fl, fr = f(left_mid), f(right_mid)
        left = (mid - lo) / 6 * (flo + 4 * fl + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * fr + fhi)
        error = (left + right - estimate) / 15
        if abs(error) <= local_tol:
            total += left + right + error
            continue
        if evaluations >= budget:
            raise QuadratureError(f"no convergence within {budget} evaluations", lo, hi)
        stack.append((mid, hi, fmid, fr, fhi, right, local_tol / 2))
        stack.append((lo, mid, flo, fl, fmid, left, local_tol / 2))
    return total


def _right_limit(fn: Evaluator, eps: float) -> Evaluator:
    """fn, with points where it is undefined (0/0 at P = 0) replaced by fn(t + eps)."""

    def wrapped(t: float) -> float:
        try:
            value = fn(t)
        except ZeroDivisionError:
            value = math.nan
        if math.isfinite(value):
            return value
        return fn(t + eps)

    return wrapped


def anchored_integrals(fn: Evaluator, base: float, points: np.ndarray, tol: float) -> np.ndarray:
    """∫_base^t fn for every t in points (constant of integration zero)."""
    order = np.argsort(points)
    out = np.empty(len(points))
    per_segment = tol / max(len(points), 1)
    above = [i for i in order if points[i] >= base]
    below = [i for i in order[::-1] if points[i] < base]
    for chain in (above, below):
        position, acc = base, 0.0
        for i in chain:
            acc += integrate(fn, position, float(points[i]), per_segment)
            position = float(points[i])
            out[i] = acc
    return out


def five_point_derivative(fn: Evaluator, t: float, h: float) -> float:
    return (-fn(t + 2 * h) + 8 * fn(t + h) - 8 * fn(t - h) + fn(t - 2 * h)) / (12 * h)


# ============================================================================
# ENGINE
# ============================================================================

def default_grid(spec: FamilySpec, points: Optional[int] = None) -> np.ndarray:
    points = config.GRID_POINTS if points is None else points
    a, b = spec.domain
    return np.linspace(a, b, points)


def _derivative_of_P(spec: FamilySpec) -> Evaluator:
    if spec.dP is not None:
        return spec.dP
    a, b = spec.domain
    h = config.FD_STEP_FRACTION * (b - a)
    return lambda t: five_point_derivative(spec.P, t, h)


def _fit_constant(k0: np.ndarray, k1: np.ndarray) -> float:
    spread = k1 - k1.mean()
    denominator = float(np.dot(spread, spread))
    if denominator <= 1e-300:
        return 0.0
    return -float(np.dot(k0 - k0.mean(), spread)) / denominator


def build_coefficients(spec: FamilySpec, s: float, grid: Optional[Sequence[float]] = None,
                       tol: Optional[float] = None, fit_constant: bool = True) -> NumericLadder:
    """Ladder coefficients f_s^+, f_{s+1}^-, g_s^+, g_{s+1}^- on the grid."""
    tol = config.QUAD_TOL if tol is None else tol
    grid = default_grid(spec) if grid is None else np.asarray(grid, dtype=float)
    a, b = spec.domain
    h = config.FD_STEP_FRACTION * (b - a)
    s = float(s)

    P = np.array([spec.P(t) for t in grid])
    if np.any(P <= 0):
        bad = float(grid[np.argmax(P <= 0)])
        raise NonPositivePError(f"P must be positive on the grid, P({bad:.6g}) = {spec.P(bad):.6g}")

    dP_fn = _derivative_of_P(spec)

    def delta_Q(t: float) -> float:
        return spec.Q(s + 1, t) - spec.Q(s, t)

    def W_fn(t: float) -> float:
        return (spec.Q(s + 1, t) + spec.Q(s, t) - dP_fn(t)) / (2 * math.sqrt(spec.P(t)))

    def log_E_integrand(t: float) -> float:
        return delta_Q(t) / spec.P(t) / 2

    def g_integrand(t: float) -> float:
        return ((spec.R(s + 1, t) - spec.R(s, t)) / math.sqrt(spec.P(t))
                - W_fn(t) * delta_Q(t) / (2 * spec.P(t)))

    eps = 1e-9 * (b - a)
    logger.debug(f"Building ladder for {spec.name} at s={s:g} on {len(grid)} points, tol={tol:g}")
    E = np.exp(anchored_integrals(_right_limit(log_E_integrand, eps), spec.base_point, grid, tol))
    I = anchored_integrals(_right_limit(g_integrand, eps), spec.base_point, grid, tol)
    dI = np.array([g_integrand(t) for t in grid])

    sqrtP = np.sqrt(P)
    dP = np.array([dP_fn(t) for t in grid])
    dsqrtP = dP / (2 * sqrtP)
    dE = E * np.array([delta_Q(t) for t in grid]) / (2 * P)
    W = np.array([W_fn(t) for t in grid])
    dW = np.array([five_point_derivative(W_fn, t, h) for t in grid])

    f_minus = sqrtP * E
    f_plus = sqrtP / E
    df_minus = dsqrtP * E + sqrtP * dE
    df_plus = dsqrtP / E - sqrtP * dE / E ** 2
    R_next = np.array([spec.R(s + 1, t) for t in grid])

    def g_terms(c: float):
        g_minus = E / 2 * (W + I + c)
        g_plus = (W - I - c) / (2 * E)
        dg_minus = dE / 2 * (W + I + c) + E / 2 * (dW + dI)
        dg_plus = (dW - dI) / (2 * E) - (W - I - c) * dE / (2 * E ** 2)
        return g_minus, g_plus, dg_minus, dg_plus

    c = 0.0
    if fit_constant:
        g_minus, g_plus, dg_minus, _ = g_terms(0.0)
        k0 = f_plus * dg_minus + g_plus * g_minus - R_next
        k1 = f_plus * dE / 2 - I / 2
        c = _fit_constant(k0, k1)
    g_minus, g_plus, dg_minus, dg_plus = g_terms(c)

    pointwise_k = f_plus * dg_minus + g_plus * g_minus - R_next
    k = float(pointwise_k.mean())
    deviation = float(np.max(np.abs(pointwise_k - k)))
    logger.info(f"🧮 {spec.name} s={s:g}: k ≈ {k:.10g} (spread {deviation:.2e}), integration constant {c:.6g}")

    return NumericLadder(
        s=s, grid=grid, E=E, W=W,
        f_plus=f_plus, f_minus=f_minus, g_plus=g_plus, g_minus=g_minus,
        df_plus=df_plus, df_minus=df_minus, dg_plus=dg_plus, dg_minus=dg_minus,
        integration_constant=c, k=k, k_deviation=deviation,
    )


def estimate_k(spec: FamilySpec, ladder: NumericLadder, s: float) -> Tuple[float, float]:
    """k_s from R_{s+1} + k_s = f_s^+ g_{s+1}^-′ + g_s^+ g_{s+1}^-, averaged over the grid."""
    R_next = np.array([spec.R(s + 1, t) for t in ladder.grid])
    pointwise = ladder.f_plus * ladder.dg_minus + ladder.g_plus * ladder.g_minus - R_next
    k = float(pointwise.mean())
    return k, float(np.max(np.abs(pointwise - k)))


def check_conditions(spec: FamilySpec, ladder: NumericLadder, s: float) -> ConditionReport:
    """
    Pointwise residuals of the five sufficiency conditions, reduced to their max.

        product   f^+ f^- = P
        q_next    f^+ f^-′ + f^+ g^- + f^- g^+ = Q_{s+1}
        q_self    f^- f^+′ + f^- g^+ + f^+ g^- = Q_s
        r_next    f^+ g^-′ + g^+ g^- = R_{s+1} + k
        r_self    f^- g^+′ + g^+ g^- = R_s + k
    """
    grid = ladder.grid
    P = np.array([spec.P(t) for t in grid])
    Q_s = np.array([spec.Q(s, t) for t in grid])
    Q_next = np.array([spec.Q(s + 1, t) for t in grid])
    R_s = np.array([spec.R(s, t) for t in grid])
    R_next = np.array([spec.R(s + 1, t) for t in grid])
    k, _ = estimate_k(spec, ladder, s)
    fp, fm, gp, gm = ladder.f_plus, ladder.f_minus, ladder.g_plus, ladder.g_minus

    residuals = {
        "product": fp * fm - P,
        "q_next": fp * ladder.df_minus + fp * gm + fm * gp - Q_next,
        "q_self": fm * ladder.df_plus + fm * gp + fp * gm - Q_s,
        "r_next": fp * ladder.dg_minus + gp * gm - R_next - k,
        "r_self": fm * ladder.dg_plus + gp * gm - R_s - k,
    }
    report = ConditionReport({name: float(np.max(np.abs(r))) for name, r in residuals.items()}, k)
    logger.debug(f"Condition residuals for {spec.name} s={s:g}: {report.residuals}")
    return report


def estimate_r(spec: FamilySpec, ladder: NumericLadder, s: float,
               floor: Optional[float] = None) -> Tuple[float, float, float]:
    """
    r_s^+ as the pointwise ratio (A_s^+ y_s)/y_{s+1}, and r_{s+1}^- = k/r_s^+.

    The factorization fixes only the product k; this is the empirical split
    for the solutions the family carries. Returns (r_plus, r_minus, spread).
    """
    if spec.y is None or spec.dy is None:
        raise FactorizationError(f"family {spec.name!r} has no solution evaluators; r cannot be estimated")
    floor = config.R_FLOOR if floor is None else floor
    grid = ladder.grid
    y_next = np.array([spec.y(s + 1, t) for t in grid])
    keep = np.abs(y_next) >= floor * np.max(np.abs(y_next))
    if not np.any(keep) or np.max(np.abs(y_next)) == 0:
        raise FactorizationError(f"every grid point sits on a zero of y_(s+1) for {spec.name!r}")
    y = np.array([spec.y(s, t) for t in grid])
    dy = np.array([spec.dy(s, t) for t in grid])
    ratio = (ladder.f_plus * dy + ladder.g_plus * y)[keep] / y_next[keep]
    r_plus = float(ratio.mean())
    k, _ = estimate_k(spec, ladder, s)
    return r_plus, k / r_plus, float(np.max(np.abs(ratio - r_plus)))


def _polyval(p: Poly, t) -> np.ndarray:
    if p.is_zero():
        return np.zeros_like(np.asarray(t, dtype=float))
    return np.polynomial.polynomial.polyval(t, p.float_coeffs())


def compare_with_exact(ladder: NumericLadder, raising: LadderOp, lowering: LadderOp) -> Dict[str, float]:
    """Max deviation of the numeric coefficients from exact LadderOp coefficients on the grid."""
    grid = ladder.grid
    return {
        "f_plus": float(np.max(np.abs(ladder.f_plus - _polyval(raising.f, grid)))),
        "g_plus": float(np.max(np.abs(ladder.g_plus - _polyval(raising.g, grid)))),
        "f_minus": float(np.max(np.abs(ladder.f_minus - _polyval(lowering.f, grid)))),
        "g_minus": float(np.max(np.abs(ladder.g_minus - _polyval(lowering.g, grid)))),
    }


# ============================================================================
# PRESETS
# ============================================================================

def _solution_evaluators(make_poly: Callable[[float], Poly]):
    cache: Dict[float, Tuple[list, list]] = {}

    def coeffs(s: float):
        if s not in cache:
            p = make_poly(s)
            cache[s] = (p.float_coeffs() or [0.0], p.derivative().float_coeffs() or [0.0])
        return cache[s]

    def y(s: float, t: float) -> float:
        return float(np.polynomial.polynomial.polyval(t, coeffs(s)[0]))

    def dy(s: float, t: float) -> float:
        return float(np.polynomial.polynomial.polyval(t, coeffs(s)[1]))

    return y, dy


def abns_degree_preset(N, u_interval: Tuple[float, float] = config.ABNS_U_INTERVAL) -> FamilySpec:
    """
    s = n: P = 1 + ξ²/N, Q_n = −2(N+n−1)ξ/N, R_n = n(2N+n−1)/N.

    The working interval is given in u = ξ/√N and mapped to ξ = √N u.
    """
    N_exact = Fraction(N)
    if N_exact <= 0:
        raise DomainError(f"N must be > 0, got {N}")
    Nf = float(N_exact)
    root = math.sqrt(Nf)

    def degree(s: float) -> int:
        if s < 0 or s != int(s):
            raise DomainError(f"abns-degree needs a nonnegative integer s, got {s}")
        return int(s)

    y, dy = _solution_evaluators(lambda s: abns(degree(s), N_exact))
    return FamilySpec(
        name=f"abns-degree(N={N_exact})",
        P=lambda t: 1 + t * t / Nf,
        dP=lambda t: 2 * t / Nf,
        Q=lambda s, t: -2 * (Nf + s - 1) * t / Nf,
        R=lambda s, t: s * (2 * Nf + s - 1) / Nf,
        domain=(u_interval[0] * root, u_interval[1] * root),
        base_point=0.0,
        y=y,
        dy=dy,
        variable="xi",
    )


def gegenbauer_param_preset(n: int, x_interval: Tuple[float, float] = config.GEGENBAUER_X_INTERVAL) -> FamilySpec:
    """s = α: P = x²(1−x²), Q_α = −(2α+1)x³, R_α = n(2α+n)x²."""
    if n < 0:
        raise DomainError(f"degree must be ≥ 0, got {n}")
    y, dy = _solution_evaluators(lambda s: gegenbauer(n, Fraction(s)))
    return FamilySpec(
        name=f"gegenbauer-param(n={n})",
        P=lambda t: t * t * (1 - t * t),
        dP=lambda t: 2 * t - 4 * t ** 3,
        Q=lambda s, t: -(2 * s + 1) * t ** 3,
        R=lambda s, t: n * (2 * s + n) * t * t,
        domain=x_interval,
        base_point=0.0,
        y=y,
        dy=dy,
        variable="x",
    )


PRESETS = {
    "abns-degree": abns_degree_preset,
    "gegenbauer-param": gegenbauer_param_preset,
}
