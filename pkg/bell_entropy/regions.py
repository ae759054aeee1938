"""Compatibility regions between beta and the four entropy measures."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal

import numpy as np
from scipy.optimize import bisect
from scipy.special import xlogy

from bell_entropy.bell import TSIRELSON, BellOperator, beta
from bell_entropy.config import BETA_DOMAIN_TOL, MEMBERSHIP_TOL, THRESHOLD_XTOL
from bell_entropy.entropy import EntropyReport, linear_entropy, marginals, von_neumann_entropy
from bell_entropy.errors import DomainError
from bell_entropy.states import DensityMatrix

LN2 = math.log(2.0)


class RegionId(str, Enum):
    LINEAR_TOTAL = "linear-total"
    LINEAR_COND_SUM = "linear-cond"
    VN_TOTAL = "vn-total"
    VN_COND_SUM = "vn-cond"


ThresholdName = Literal["linearEntropy", "linearCondSum", "vnEntropy", "vnCondSum", "vnCondZeroBeta"]

THRESHOLD_NAMES: tuple[ThresholdName, ...] = (
    "linearEntropy",
    "linearCondSum",
    "vnEntropy",
    "vnCondSum",
    "vnCondZeroBeta",
)

# Published three-digit values, reported next to the computed ones.
ROUNDED_THRESHOLDS = {
    "linearEntropy": 0.5,
    "linearCondSum": 0.0,
    "vnEntropy": 0.833,
    "vnCondSum": 0.28,
    "vnCondZeroBeta": 2.206,
}


@dataclass(frozen=True)
class RegionVerdict:
    region: RegionId
    beta_val: float
    entropy_val: float
    upper_bound: float
    lower_bound: float
    inside: bool
    margin: float

    def to_dict(self) -> dict:
        return {
            "region": self.region.value,
            "beta": self.beta_val,
            "entropy": self.entropy_val,
            "upperBound": self.upper_bound,
            "lowerBound": self.lower_bound,
            "inside": self.inside,
            "margin": self.margin,
        }


def _scaled_beta(beta_val: float) -> float:
    if not math.isfinite(beta_val) or abs(beta_val) > TSIRELSON + BETA_DOMAIN_TOL:
        raise DomainError(f"|beta| must not exceed 2*sqrt(2), got {beta_val}")
    return min(1.0, abs(beta_val) / TSIRELSON)


def _vn_total(beta_val: float) -> float:
    b = _scaled_beta(beta_val)
    return float(2.0 * LN2 - xlogy(1.0 + b, 1.0 + b) - xlogy(1.0 - b, 1.0 - b))


def upper_bound(region: RegionId, beta_val: float) -> float:
    """Largest entropy value compatible with beta in the given region."""
    _scaled_beta(beta_val)
    b2 = min(beta_val * beta_val, 8.0)
    if region is RegionId.LINEAR_TOTAL:
        return min(0.75 - b2 / 16.0, 1.0 - b2 / 8.0)
    if region is RegionId.LINEAR_COND_SUM:
        return min(0.5 - b2 / 8.0, 1.0 - b2 / 4.0)
    if region is RegionId.VN_TOTAL:
        return _vn_total(beta_val)
    if region is RegionId.VN_COND_SUM:
        return 2.0 * _vn_total(beta_val) - 2.0 * LN2
    raise ValueError(f"Unknown region: {region}")


def lower_bound(region: RegionId) -> float:
    if region in (RegionId.LINEAR_TOTAL, RegionId.VN_TOTAL):
        return 0.0
    if region is RegionId.LINEAR_COND_SUM:
        return -1.0
    if region is RegionId.VN_COND_SUM:
        return -2.0 * LN2
    raise ValueError(f"Unknown region: {region}")


def entropy_value(region: RegionId, linear: EntropyReport, von_neumann: EntropyReport) -> float:
    """The entropy coordinate a region is drawn in."""
    return {
        RegionId.LINEAR_TOTAL: linear.s12,
        RegionId.LINEAR_COND_SUM: linear.cond_sum,
        RegionId.VN_TOTAL: von_neumann.s12,
        RegionId.VN_COND_SUM: von_neumann.cond_sum,
    }[region]


def verdict(region: RegionId, beta_val: float, entropy_val: float, tol: float = MEMBERSHIP_TOL) -> RegionVerdict:
    upper = upper_bound(region, beta_val)
    lower = lower_bound(region)
    return RegionVerdict(
        region=region,
        beta_val=beta_val,
        entropy_val=entropy_val,
        upper_bound=upper,
        lower_bound=lower,
        inside=lower - tol <= entropy_val <= upper + tol,
        margin=min(entropy_val - lower, upper - entropy_val),
    )


def classify(rho: DensityMatrix, b: BellOperator, tol: float = MEMBERSHIP_TOL) -> list[RegionVerdict]:
    """One verdict per region for the point (beta, entropy) of rho under b."""
    beta_val = beta(rho, b)
    reduced = marginals(rho)
    linear = linear_entropy(rho, reduced)
    von_neumann = von_neumann_entropy(rho, reduced)
    return [verdict(region, beta_val, entropy_value(region, linear, von_neumann), tol) for region in RegionId]


def _vn_cond_zero_beta() -> float:
    return float(bisect(lambda x: upper_bound(RegionId.VN_COND_SUM, x), 2.0, TSIRELSON, xtol=THRESHOLD_XTOL))


def threshold(which: ThresholdName) -> float:
    """Entropy levels above which no Bell violation is possible.

    vnCondZeroBeta is the beta at which the von Neumann conditional-sum bound
    crosses zero.
    """
    root2 = math.sqrt(2.0)
    if which == "linearEntropy":
        return 0.5
    if which == "linearCondSum":
        return 0.0
    if which == "vnEntropy":
        return 3.0 * LN2 - root2 * math.log(1.0 + root2)
    if which == "vnCondSum":
        return 4.0 * LN2 - 2.0 * root2 * math.log(1.0 + root2)
    if which == "vnCondZeroBeta":
        return _vn_cond_zero_beta()
    raise ValueError(f"Unknown threshold: {which}")


def beta_grid(n_points: int) -> np.ndarray:
    """Uniform grid over [-2 sqrt2, 2 sqrt2], exactly antisymmetric about 0."""
    if n_points < 2:
        raise DomainError(f"n_points must be >= 2, got {n_points}")
    raw = np.linspace(-TSIRELSON, TSIRELSON, n_points)
    return (raw - raw[::-1]) / 2.0


def boundary_curve(region: RegionId, n_points: int) -> list[tuple[float, float]]:
    return [(float(b), upper_bound(region, float(b))) for b in beta_grid(n_points)]
