"""Verification suites as a tool."""

from bell_entropy.config import DEFAULT_RESTARTS, MEMBERSHIP_TOL
from bell_entropy.verify import run_suite


def run_verification(
    suite: str,
    samples: int,
    seed: int = 0,
    grid: int = 50,
    threads: int = 1,
    membership_tol: float = MEMBERSHIP_TOL,
    restarts: int = DEFAULT_RESTARTS,
) -> dict:
    reports = run_suite(
        suite,
        samples,
        seed=seed,
        grid_n=grid,
        threads=threads,
        membership_tol=membership_tol,
        restarts=restarts,
    )
    return {
        "suite": suite,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
