"""
Runtime configuration

Values come from the environment (a local .env file is honoured), and the
command-line flags override them. Bad values are collected in PROBLEMS
instead of raising at import time; main.py refuses to start if any exist.
"""

import os
from fractions import Fraction
from typing import List

from dotenv import load_dotenv

load_dotenv()

PROBLEMS: List[str] = []


def _env_number(name: str, default, kind):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = kind(raw.strip())
    except (ValueError, ZeroDivisionError):
        PROBLEMS.append(f"{name}={raw!r} is not a valid {kind.__name__}")
        return default
    if value <= 0:
        PROBLEMS.append(f"{name}={raw!r} must be positive")
        return default
    return value


# ============================================================================
# CONFIGURATION - SET THESE AS ENVIRONMENT VARIABLES (OR IN .env)
# ============================================================================

LOG_LEVEL = os.getenv("ABNS_LOG_LEVEL", "INFO").upper()
if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
    PROBLEMS.append(f"ABNS_LOG_LEVEL={LOG_LEVEL!r} is not a logging level")
    LOG_LEVEL = "INFO"

# factorization engine
QUAD_TOL = _env_number("ABNS_QUAD_TOL", 1e-10, float)
QUAD_BUDGET = _env_number("ABNS_QUAD_BUDGET", 1_000_000, int)
GRID_POINTS = _env_number("ABNS_GRID_POINTS", 39, int)

# zeros
ROOT_TOL = _env_number("ABNS_ROOT_TOL", Fraction(1, 10**9), Fraction)

# verify fan-out
WORKERS = _env_number("ABNS_WORKERS", 1, int)

# ============================================================================
# CONSTANTS
# ============================================================================

# finite-difference step as a fraction of the working interval
FD_STEP_FRACTION = 1e-4

# grid points where |y_{s+1}| is below this share of its maximum are left out of r^+
R_FLOOR = 1e-6

# default working intervals of the presets
ABNS_U_INTERVAL = (0.1, 2.0)
GEGENBAUER_X_INTERVAL = (0.1, 0.9)

# exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
