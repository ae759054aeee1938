"""Boundary and Gibbs curve tables."""

import numpy as np

from bell_entropy.extremal import gibbs_curve
from bell_entropy.regions import RegionId, boundary_curve


def boundary_curve_table(region: str, points: int) -> dict:
    """
    Upper boundary of a region on a uniform beta grid.

    Args:
        region: linear-total, linear-cond, vn-total or vn-cond
        points: number of grid points (>= 2)

    Returns:
        Dictionary with the region, column names and rows of (beta, bound)
    """
    region_id = RegionId(region)
    return {
        "region": region_id.value,
        "columns": ["beta", "bound"],
        "rows": [list(row) for row in boundary_curve(region_id, points)],
    }


def gibbs_curve_table(xi1: float, points: int, lambda_max: float = 10.0) -> dict:
    """(lambda, beta, entropy) of the Gibbs family for one operator."""
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    grid = np.linspace(-lambda_max, lambda_max, points)
    return {
        "xi1": xi1,
        "columns": ["lambda", "beta", "entropy"],
        "rows": [[p.lambda_param, p.beta_val, p.entropy_val] for p in gibbs_curve(xi1, grid)],
    }
