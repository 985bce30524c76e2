#!/usr/bin/env python3
"""
ABNS ladder workbench - command line

Generates ABNS, Gegenbauer and Hermite polynomials exactly, verifies the
ladder / recurrence-shift / bridge identities as zero-polynomial statements,
runs the numeric factorization engine, and computes zeros and N → ∞ limits.

Usage:
    python main.py gen abns --n 2 --N 1
    python main.py verify --suite all --n-max 10 --N 1,2,5
    python main.py facto --preset abns-degree --n 1 --N 1
    python main.py zeros --n 2 --N 1 --tol 1e-9
    python main.py limit --n 4 --N 10,100,1000

Exact values are written as "p/q" strings; numeric commands write floats
together with the tolerance they were computed at. Logs go to stderr.

Exit codes: 0 all checks pass, 1 identity or consistency failure, 2 usage error.
"""

import csv
import json
import logging
import sys
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

import click

import config
from exact import AbnsError, DomainError, format_rational, parse_rational
from exprfile import ExpressionError, load_family
from factoengine import (
    PRESETS,
    build_coefficients,
    check_conditions,
    default_grid,
    estimate_k,
    estimate_r,
)
from families import abns, gegenbauer, hermite, hermite_distance
from identities import FAIL, SUITES, run_suite
from zeros import abns_zeros, interlacing_check, mapped_gegenbauer_zeros, roots_agree

logger = logging.getLogger("abns")

# ============================================================================
# OUTPUT COLUMNS
# ============================================================================

GEN_COLUMNS = ("family", "n", "parameter", "pair", "degree", "coefficients")
VERIFY_COLUMNS = ("identity", "n", "parameter", "direction", "status", "residual", "reason")
FACTO_COLUMNS = (
    "kind", "family", "s", "grid", "E", "W", "f_plus", "f_minus", "g_plus", "g_minus",
    "k", "k_deviation", "res_product", "res_q_next", "res_q_self", "res_r_next", "res_r_self",
    "r_plus", "r_minus", "r_deviation", "integration_constant", "tol",
)
ZEROS_COLUMNS = ("n", "N", "index", "root", "lo", "hi", "mapped", "agree", "tol")
LIMIT_COLUMNS = ("n", "N", "distance", "ratio")


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
        force=True,
    )


# ============================================================================
# PARSING HELPERS
# ============================================================================

def _rational_list(ctx, param, value: Optional[str]) -> Optional[List[Fraction]]:
    if value is None:
        return None
    try:
        values = [parse_rational(part) for part in value.split(",") if part.strip()]
    except DomainError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    if not values:
        raise click.BadParameter("expected at least one value", ctx=ctx, param=param)
    return values


def _positive_rational_list(ctx, param, value: Optional[str]) -> Optional[List[Fraction]]:
    values = _rational_list(ctx, param, value)
    bad = [format_rational(v) for v in values or () if v <= 0]
    if bad:
        raise click.BadParameter(f"values must be > 0, got {', '.join(bad)}", ctx=ctx, param=param)
    return values


def _degree_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    """"3", "0..5" or "1,2,7"."""
    if value is None:
        return None
    try:
        if ".." in value:
            first, last = (int(part) for part in value.split("..", 1))
            degrees = list(range(first, last + 1))
        else:
            degrees = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected an integer, a range a..b or a comma list, got {value!r}",
                                 ctx=ctx, param=param)
    if not degrees or min(degrees) < 0:
        raise click.BadParameter(f"degrees must be nonnegative, got {value!r}", ctx=ctx, param=param)
    return degrees


def _tolerance(ctx, param, value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    try:
        tol = parse_rational(value, allow_decimal=True)
    except DomainError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    if tol <= 0:
        raise click.BadParameter("tolerance must be positive", ctx=ctx, param=param)
    return tol


def _interval(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        a, b = (float(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 'a,b', got {value!r}", ctx=ctx, param=param)
    if not a < b:
        raise click.BadParameter(f"expected a < b, got {value!r}", ctx=ctx, param=param)
    return a, b


def _single(values: Optional[List[Fraction]], flag: str) -> Fraction:
    if values is None or len(values) != 1:
        raise click.UsageError(f"{flag} takes exactly one value for this command")
    return values[0]


# ============================================================================
# OUTPUT
# ============================================================================

def emit(records: Iterable[Dict], fmt: str, out: str, columns: Sequence[str]) -> None:
    records = list(records)
    with click.open_file(out, "w") as stream:
        if fmt == "json":
            json.dump(records, stream, indent=2, ensure_ascii=False)
            stream.write("\n")
        else:
            writer = csv.DictWriter(stream, fieldnames=list(columns), restval="", extrasaction="ignore")
            writer.writeheader()
            for record in records:
                writer.writerow({key: " ".join(value) if isinstance(value, list) else value
                                 for key, value in record.items()})
    if out != "-":
        logger.info(f"💾 Wrote {len(records)} records to {out}")


def output_options(command):
    command = click.option("--out", default="-", show_default=True, help="Output path, '-' for stdout.")(command)
    command = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                           show_default=True)(command)
    return command


def run_guarded(action) -> None:
    """Map library errors onto the exit-code contract."""
    try:
        code = action()
    except (DomainError, ExpressionError) as e:
        logger.error(f"❌ {e}")
        sys.exit(config.EXIT_USAGE)
    except AbnsError as e:
        # root-count, quadrature and parity failures
        logger.error(f"❌ {e}")
        sys.exit(config.EXIT_FAILURE)
    sys.exit(code or config.EXIT_OK)


# ============================================================================
# COMMANDS
# ============================================================================

@click.group()
@click.option("--log-level", default=config.LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False))
@click.pass_context
def cli(ctx, log_level):
    """Exact ABNS / Gegenbauer ladder identities and the numeric factorization engine."""
    setup_logging(log_level)
    if config.PROBLEMS:
        for problem in config.PROBLEMS:
            logger.error(f"❌ Configuration: {problem}")
        ctx.exit(config.EXIT_USAGE)


@cli.command()
@click.argument("family", type=click.Choice(["abns", "gegenbauer", "hermite"]))
@click.option("--n", "degrees", default="0..5", callback=_degree_list, show_default=True,
              help="Degree, range a..b or comma list.")
@click.option("--N", "N_values", default="1", callback=_positive_rational_list, show_default=True,
              help="ABNS parameters, e.g. 1,3/2,2.")
@click.option("--alpha", "alphas", default="1", callback=_rational_list, show_default=True,
              help="Gegenbauer parameters.")
@click.option("--pair", type=click.Choice(["i", "ii"]), default="i", show_default=True,
              help="r-pair normalization of the ABNS family.")
@output_options
def gen(family, degrees, N_values, alphas, pair, fmt, out):
    """Emit exact coefficients, one record per (n, parameter)."""

    def action():
        records = []
        for n in degrees:
            if family == "hermite":
                polys = [("", hermite(n))]
            elif family == "abns":
                polys = [(format_rational(N), abns(n, N, pair)) for N in N_values]
            else:
                polys = [(format_rational(a), gegenbauer(n, a)) for a in alphas]
            for parameter, poly in polys:
                records.append({
                    "family": family,
                    "n": n,
                    "parameter": parameter,
                    "pair": pair if family == "abns" else "",
                    "degree": poly.degree,
                    "coefficients": poly.to_strings(),
                })
        logger.info(f"✅ Generated {len(records)} {family} polynomials")
        emit(records, fmt, out, GEN_COLUMNS)

    run_guarded(action)


@cli.command()
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--N", "N_values", default="1,3/2,2,5,10,137", callback=_positive_rational_list, show_default=True)
@click.option("--alpha", "alphas", default="1/2,1,2,5,10", callback=_positive_rational_list, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=config.WORKERS, show_default=True)
@click.option("--pair", type=click.Choice(["i", "ii"]), default="i", show_default=True)
@output_options
def verify(suite, n_max, N_values, alphas, workers, pair, fmt, out):
    """Check identities exactly; exit 0 iff every in-domain identity holds."""

    def action():
        reports = run_suite(suite, n_max, N_values, alphas, workers=workers, pair=pair)
        emit((r.to_record() for r in reports), fmt, out, VERIFY_COLUMNS)
        failed = [r for r in reports if r.status == FAIL]
        return config.EXIT_FAILURE if failed else config.EXIT_OK

    run_guarded(action)


@cli.command()
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None)
@click.option("--family", "family_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Expression file describing P, Q_s, R_s.")
@click.option("--n", "degree", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--N", "N_values", default="1", callback=_positive_rational_list, show_default=True)
@click.option("--alpha", "alphas", default="2", callback=_rational_list, show_default=True)
@click.option("--s", "index", type=float, default=0.0, show_default=True, help="Index s for --family.")
@click.option("--interval", callback=_interval, default=None,
              help="Working interval 'a,b' (u for abns-degree, x for gegenbauer-param).")
@click.option("--points", type=click.IntRange(min=3), default=config.GRID_POINTS, show_default=True)
@click.option("--tol", type=float, default=config.QUAD_TOL, show_default=True)
@click.option("--no-fit-constant", is_flag=True, help="Keep the integration constant at zero.")
@output_options
def facto(preset, family_file, degree, N_values, alphas, index, interval, points, tol, no_fit_constant, fmt, out):
    """Run the factorization engine on a preset or a user family."""
    if (preset is None) == (family_file is None):
        raise click.UsageError("give exactly one of --preset or --family")

    def action():
        if preset == "abns-degree":
            N = _single(N_values, "--N")
            spec = PRESETS[preset](N, *([interval] if interval else []))
            s = degree
        elif preset == "gegenbauer-param":
            spec = PRESETS[preset](degree, *([interval] if interval else []))
            s = float(_single(alphas, "--alpha"))
        else:
            spec = load_family(family_file)
            if interval:
                logger.warning("⚠️ --interval is ignored for --family; the file sets the domain")
            s = index
        logger.info(f"🚀 Factorizing {spec.name} at s={s:g} on {spec.domain}")

        ladder = build_coefficients(spec, s, default_grid(spec, points), tol, fit_constant=not no_fit_constant)
        conditions = check_conditions(spec, ladder, s)
        k, k_deviation = estimate_k(spec, ladder, s)
        summary = {
            "kind": "summary", "family": spec.name, "s": s,
            "k": k, "k_deviation": k_deviation,
            **{f"res_{name}": value for name, value in conditions.residuals.items()},
            "integration_constant": ladder.integration_constant, "tol": tol,
        }
        if spec.y is not None:
            r_plus, r_minus, r_deviation = estimate_r(spec, ladder, s)
            summary.update(r_plus=r_plus, r_minus=r_minus, r_deviation=r_deviation)
        else:
            logger.info("No solution evaluators: r-coefficients not estimated")
        logger.info(f"✅ k ≈ {k:.10g}, worst condition residual {conditions.worst:.2e}")

        grid_records = [{"kind": "grid", "family": spec.name, "s": s, **row, "tol": tol}
                        for row in ladder.to_records()]
        emit(grid_records + [summary], fmt, out, FACTO_COLUMNS)

    run_guarded(action)


@cli.command()
@click.option("--n", "degree", type=click.IntRange(min=1), required=True)
@click.option("--N", "N_values", default="1", callback=_positive_rational_list, show_default=True)
@click.option("--tol", default=format_rational(config.ROOT_TOL), callback=_tolerance, show_default=True)
@click.option("--interlace", is_flag=True, help="Also report whether zeros of F_n and F_{n+1} interlace.")
@output_options
def zeros(degree, N_values, tol, interlace, fmt, out):
    """Zeros of F_n^N with the Gegenbauer-map cross-check column."""

    def action():
        records, mismatches = [], 0
        for N in N_values:
            direct = abns_zeros(degree, N, tol)
            mapped = mapped_gegenbauer_zeros(degree, N, tol)
            agree = roots_agree(direct, mapped, 2 * tol)
            if not agree:
                mismatches += 1
                logger.warning(f"❌ Gegenbauer-mapped zeros disagree for n={degree}, N={format_rational(N)}")
            for i, ((lo, hi), image) in enumerate(zip(direct.intervals, mapped.midpoints)):
                records.append({
                    "n": degree, "N": format_rational(N), "index": i,
                    "root": float((lo + hi) / 2), "lo": float(lo), "hi": float(hi),
                    "mapped": float(image), "agree": agree, "tol": float(tol),
                })
            if interlace:
                logger.info(f"Zeros of F_{degree} and F_{degree + 1} at N={format_rational(N)} "
                            f"{'interlace' if interlacing_check(degree, N, tol) else 'do NOT interlace'}")
        emit(records, fmt, out, ZEROS_COLUMNS)
        return config.EXIT_FAILURE if mismatches else config.EXIT_OK

    run_guarded(action)


@cli.command()
@click.option("--n", "degrees", default="4", callback=_degree_list, show_default=True)
@click.option("--N", "N_values", default="10,100,1000", callback=_positive_rational_list, show_default=True)
@output_options
def limit(degrees, N_values, fmt, out):
    """‖coeffs(F_n^N) − coeffs(H_n)‖∞ over an N sweep."""

    def action():
        records = []
        for n in degrees:
            previous = None
            for N in N_values:
                distance = hermite_distance(n, N)
                ratio = float(previous / distance) if previous is not None and distance else ""
                records.append({"n": n, "N": format_rational(N), "distance": float(distance), "ratio": ratio})
                previous = distance
        emit(records, fmt, out, LIMIT_COLUMNS)

    run_guarded(action)


def main():
    cli()


if __name__ == "__main__":
    main()
