"""Tolerances, defaults and environment-driven settings."""

import os
import sys

from bell_entropy.errors import ConfigError

# numkit
HERMITIAN_TOL = 1e-10
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100

# states
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
DEFAULT_SEPARABLE_TERMS = 4

# bell
UNIT_TOL = 1e-12
DEGENERACY_TOL = 1e-9
DEFAULT_RESTARTS = 32
ASCENT_TOL = 1e-12
ASCENT_MAX_ITER = 10_000

# entropy
ENTROPY_CLAMP = 1e-12
INEQUALITY_TOL = 1e-12

# regions
MEMBERSHIP_TOL = 1e-9
BETA_DOMAIN_TOL = 1e-12
THRESHOLD_XTOL = 1e-10

# extremal
GIBBS_OVERFLOW = 700.0
GIBBS_SHIFT = 30.0

# verify
ATTAIN_DEPTH = 1e-3
ATTAIN_TOL = 1e-4
EXTREMAL_EPS = 1e-4
EXTREMAL_CUBIC = 10.0


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def default_seed() -> int:
    """Seed used when no --seed flag is given (env: BEA_SEED)."""
    return _env_int("BEA_SEED", 0)


def default_threads() -> int:
    return max(1, _env_int("BEA_THREADS", 1))


def debug_enabled() -> bool:
    return bool(os.environ.get("BEA_DEBUG"))


def debug(component: str, message: str) -> None:
    """Print a debug line to stderr when BEA_DEBUG is set."""
    if debug_enabled():
        print(f"[{component}] {message}", file=sys.stderr, flush=True)


def log(component: str, message: str) -> None:
    """Status line on stderr; stdout carries only command output."""
    print(f"[{component}] {message}", file=sys.stderr, flush=True)
