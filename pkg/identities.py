"""
Exact verification of the ladder, recurrence-shift and bridge identities

Every check builds LHS − RHS as a Poly and reports it; an identity holds
iff that difference is the empty (zero) polynomial. Nothing is sampled.

Relations with √-scaled arguments are checked after multiplying through by
the power of √N or √(1 ± 1/N) that clears all irrational factors. Both sides
have parity n, so (√c)^n p(√c·ξ) only ever needs integer powers of c (see
exact.scaled_compose) and the whole statement lives in Q[ξ].
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from exact import DomainError, Poly, Scalar, T, format_rational, scaled_compose
from families import abns, gegenbauer, unball
from ladders import (
    abns_lowering,
    abns_raising,
    abns_shift_lowering,
    abns_shift_raising,
    degree_k,
    degree_r_pair,
    gegenbauer_param_lowering,
    gegenbauer_param_raising,
    param_k,
    param_r_minus,
    param_r_plus,
    shift_r_minus,
    shift_r_plus,
)

logger = logging.getLogger(__name__)

# ============================================================================
# CONSTANTS
# ============================================================================

SUITES = ("degree", "param", "nagel", "shift", "ode", "compose", "all")

# report ordering within a suite run
IDENTITY_ORDER = (
    "degree",
    "param",
    "nagel",
    "shift",
    "ode-abns",
    "ode-gegenbauer",
    "compose",
    "compose-reverse",
    "compose-param",
    "commuting-path",
)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    n: int
    parameter: Fraction
    direction: Optional[str] = None
    difference: Poly = field(default_factory=Poly)
    status: str = PASS
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.status == PASS

    def sort_key(self) -> Tuple:
        return (self.n, self.parameter, IDENTITY_ORDER.index(self.identity), self.direction or "")

    def to_record(self) -> Dict:
        return {
            "identity": self.identity,
            "n": self.n,
            "parameter": format_rational(self.parameter),
            "direction": self.direction or "",
            "status": self.status,
            "residual": self.difference.to_strings(),
            "reason": self.reason,
        }


def _report(identity: str, n: int, parameter: Scalar, direction: Optional[str], difference: Poly) -> IdentityReport:
    status = PASS if difference.is_zero() else FAIL
    report = IdentityReport(identity, n, Fraction(parameter), direction, difference, status)
    if status == FAIL:
        logger.warning(f"❌ {identity} n={n} param={format_rational(parameter)} {direction or ''} residual={difference!r}")
    else:
        logger.debug(f"✅ {identity} n={n} param={format_rational(parameter)} {direction or ''}")
    return report


def _direction(direction: str) -> str:
    if direction not in ("up", "down"):
        raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")
    return direction


# ============================================================================
# ODE RESIDUALS
# ============================================================================

def ode_residual(p: Poly, n: int, param: Scalar, which: str = "abns") -> Poly:
    """
    Residual of the ABNS equation
        (1+ξ²/N)y″ − (2/N)(N+n−1)ξy′ + (n/N)(2N+n−1)y
    or of the Gegenbauer equation multiplied by x²
        x²(1−x²)y″ − (2N+1)x³y′ + n(2N+n)x²y.
    """
    N = Fraction(param)
    d1 = p.derivative()
    d2 = d1.derivative()
    if which == "abns":
        if N <= 0:
            raise DomainError(f"N must be > 0, got {format_rational(N)}")
        return ((1 + T * T * (1 / N)) * d2
                - T * d1 * (2 * (N + n - 1) / N)
                + p * (Fraction(n) * (2 * N + n - 1) / N))
    if which == "gegenbauer":
        x2 = T * T
        return (x2 * (1 - x2) * d2
                - x2 * T * d1 * (2 * N + 1)
                + x2 * p * (n * (2 * N + n)))
    raise DomainError(f"unknown ODE family {which!r} (expected 'abns' or 'gegenbauer')")


def ode_check(n: int, param: Scalar, which: str = "abns") -> IdentityReport:
    family = abns(n, param) if which == "abns" else gegenbauer(n, param)
    return _report(f"ode-{which}", n, param, None, ode_residual(family, n, param, which))


# ============================================================================
# LADDER CHECKS
# ============================================================================

def degree_ladder_check(n: int, N: Scalar, direction: str, pair: str = "i") -> IdentityReport:
    """
    up:   A_n^+ F_n − r_n^+ F_{n+1}
    down: F_n′ − r_n^- F_{n−1}
    """
    _direction(direction)
    if direction == "up":
        r_plus, _ = degree_r_pair(n, N, pair)
        difference = abns_raising(n, N).apply(abns(n, N, pair)) - abns(n + 1, N, pair) * r_plus
    else:
        if n < 1:
            raise DomainError(f"the degree down-ladder needs n ≥ 1, got {n}")
        _, r_minus = degree_r_pair(n - 1, N, pair)
        difference = abns_lowering().apply(abns(n, N, pair)) - abns(n - 1, N, pair) * r_minus
    return _report("degree", n, N, direction, difference)


def param_ladder_check(n: int, alpha: Scalar, direction: str) -> IdentityReport:
    """
    up:   [x d/dx + (2α+n)] C_n^α − 2α C_n^{α+1}
    down: [x(1−x²) d/dx − (2α+n−1−nx²)] C_n^α − r^- C_n^{α−1}
    """
    _direction(direction)
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {format_rational(alpha)}")
    if direction == "up":
        difference = (gegenbauer_param_raising(n, alpha).apply(gegenbauer(n, alpha))
                      - gegenbauer(n, alpha + 1) * param_r_plus(alpha))
    else:
        r_minus = param_r_minus(n, alpha)
        difference = (gegenbauer_param_lowering(n, alpha).apply(gegenbauer(n, alpha))
                      - gegenbauer(n, alpha - 1) * r_minus)
    return _report("param", n, alpha, direction, difference)


def nagel_check(n: int, N: Scalar) -> IdentityReport:
    """N^{n/2}·F_n^N(√N u) − n!·(1+u²)^{n/2} C_n^N(u/√(1+u²)), in u."""
    N = Fraction(N)
    lhs = scaled_compose(abns(n, N), N, n)
    rhs = unball(gegenbauer(n, N), n) * math.factorial(n)
    return _report("nagel", n, N, None, lhs - rhs)


def shift_check(n: int, N: Scalar, direction: str) -> IdentityReport:
    """
    up:   S^+ F_n^N − 2N·(√(1+1/N))^n F_n^{N+1}(√(1+1/N) ξ)
    down: S^- F_n^N − r^-·(√(1−1/N))^n F_n^{N−1}(√(1−1/N) ξ)
    """
    _direction(direction)
    N = Fraction(N)
    if direction == "up":
        lhs = abns_shift_raising(n, N).apply(abns(n, N))
        rhs = scaled_compose(abns(n, N + 1), (N + 1) / N, n) * shift_r_plus(N)
    else:
        r_minus = shift_r_minus(n, N)
        lhs = abns_shift_lowering(n, N).apply(abns(n, N))
        rhs = scaled_compose(abns(n, N - 1), (N - 1) / N, n) * r_minus
    return _report("shift", n, N, direction, lhs - rhs)


# ============================================================================
# COMPOSITION CHECKS
# ============================================================================

def composition_check(n: int, N: Scalar) -> IdentityReport:
    """A_{n+1}^- A_n^+ F_n − k_n F_n."""
    F = abns(n, N)
    chain = abns_raising(n, N).then(abns_lowering())
    return _report("compose", n, N, None, chain.apply(F) - F * degree_k(n, N))


def reverse_composition_check(n: int, N: Scalar) -> IdentityReport:
    """A_n^+ A_{n+1}^- F_{n+1} − k_n F_{n+1}."""
    F = abns(n + 1, N)
    chain = abns_lowering().then(abns_raising(n, N))
    return _report("compose-reverse", n, N, None, chain.apply(F) - F * degree_k(n, N))


def param_composition_check(n: int, alpha: Scalar) -> IdentityReport:
    """lowering(α+1)·raising(α) C_n^α − k_α C_n^α with k_α = −(2α+n+1)(2α+n)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {format_rational(alpha)}")
    C = gegenbauer(n, alpha)
    chain = gegenbauer_param_raising(n, alpha).then(gegenbauer_param_lowering(n, alpha + 1))
    return _report("compose-param", n, alpha, None, chain.apply(C) - C * param_k(n, alpha))


def commuting_path_check(n: int, N: Scalar) -> IdentityReport:
    """
    Raise N with the shift up-ladder, come back down from N+1, and compare
    with the product of the two shift r-coefficients times F_n^N.

    Raising lands on F^{N+1} in the argument scaled by (N+1)/N; undoing that
    scaling before the down-ladder, and redoing it after, keeps every step
    in the variable the next operator expects.
    """
    N = Fraction(N)
    if N <= 0:
        raise DomainError(f"N must be > 0, got {format_rational(N)}")
    F = abns(n, N)
    up = abns_shift_raising(n, N).apply(F)
    on_next = scaled_compose(up, N / (N + 1), n)
    down = abns_shift_lowering(n, N + 1).apply(on_next)
    back = scaled_compose(down, (N + 1) / N, n)
    scalar = shift_r_plus(N) * shift_r_minus(n, N + 1)
    return _report("commuting-path", n, N, None, back - F * scalar)


# ============================================================================
# SUITES
# ============================================================================

_CHECKS = {
    "degree": degree_ladder_check,
    "param": param_ladder_check,
    "nagel": nagel_check,
    "shift": shift_check,
    "ode": ode_check,
    "compose": composition_check,
    "compose-reverse": reverse_composition_check,
    "compose-param": param_composition_check,
    "commuting-path": commuting_path_check,
}


def _identity_name(name: str, args: Tuple) -> str:
    if name == "ode":
        return f"ode-{args[2]}"
    return name


def _run_task(task: Tuple[str, Tuple]) -> IdentityReport:
    name, args = task
    try:
        return _CHECKS[name](*args)
    except DomainError as e:
        n, parameter = args[0], args[1]
        direction = args[2] if len(args) > 2 and args[2] in ("up", "down") else None
        logger.debug(f"⏭️ {name} n={n} param={format_rational(parameter)} skipped: {e}")
        return IdentityReport(_identity_name(name, args), n, Fraction(parameter), direction,
                              Poly(), SKIPPED, f"out of domain: {e}")


def suite_tasks(suite: str, n_max: int, N_list: Sequence[Scalar],
                alpha_list: Sequence[Scalar], pair: str = "i") -> List[Tuple[str, Tuple]]:
    """The (check, arguments) pairs a suite consists of."""
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r} (expected one of {', '.join(SUITES)})")
    wanted = set(SUITES[:-1]) if suite == "all" else {suite}
    degrees = range(n_max + 1)
    tasks: List[Tuple[str, Tuple]] = []
    for n in degrees:
        for N in N_list:
            if "degree" in wanted:
                tasks.append(("degree", (n, N, "up", pair)))
                if n >= 1:
                    tasks.append(("degree", (n, N, "down", pair)))
            if "nagel" in wanted:
                tasks.append(("nagel", (n, N)))
            if "shift" in wanted:
                tasks.append(("shift", (n, N, "up")))
                tasks.append(("shift", (n, N, "down")))
            if "ode" in wanted:
                tasks.append(("ode", (n, N, "abns")))
            if "compose" in wanted:
                tasks.append(("compose", (n, N)))
                tasks.append(("compose-reverse", (n, N)))
                tasks.append(("commuting-path", (n, N)))
        for alpha in alpha_list:
            if "param" in wanted:
                tasks.append(("param", (n, alpha, "up")))
                tasks.append(("param", (n, alpha, "down")))
            if "ode" in wanted:
                tasks.append(("ode", (n, alpha, "gegenbauer")))
            if "compose" in wanted:
                tasks.append(("compose-param", (n, alpha)))
    return tasks


def run_suite(suite: str, n_max: int, N_list: Iterable[Scalar], alpha_list: Iterable[Scalar],
              workers: int = 1, pair: str = "i") -> List[IdentityReport]:
    """
    Run a verification suite over the (n, parameter) grid.

    Out-of-domain combinations come back as "skipped" reports. The result is
    sorted by identity, n, parameter and direction whatever the completion
    order of the workers.
    """
    N_list = [Fraction(N) for N in N_list]
    alpha_list = [Fraction(a) for a in alpha_list]
    tasks = suite_tasks(suite, n_max, N_list, alpha_list, pair)
    logger.info(f"🔍 Running suite '{suite}': {len(tasks)} checks, n ≤ {n_max}, "
                f"N ∈ {{{', '.join(map(format_rational, N_list))}}}, "
                f"α ∈ {{{', '.join(map(format_rational, alpha_list))}}}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        reports = [_run_task(task) for task in tasks]
    reports.sort(key=IdentityReport.sort_key)
    failed = sum(r.status == FAIL for r in reports)
    skipped = sum(r.status == SKIPPED for r in reports)
    logger.info(f"{'✅' if not failed else '❌'} Suite '{suite}' done: "
                f"{len(reports) - failed - skipped} passed, {failed} failed, {skipped} skipped")
    return reports
