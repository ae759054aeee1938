"""State families that sit on or fill the compatibility regions.

Bell-diagonal families are assembled in the basis returned by
``bell.bell_basis``; indices 0..3 refer to eigenvalues (xi1, xi2, -xi2, -xi1).
"""

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy.optimize import bisect, brentq

from bell_entropy.bell import (
    TSIRELSON,
    BellOperator,
    bell_basis,
    beta,
    build_bell,
    canonical_settings,
    settings_for_xi1,
)
from bell_entropy.config import ATTAIN_DEPTH, ATTAIN_TOL, GIBBS_OVERFLOW, GIBBS_SHIFT, debug
from bell_entropy.entropy import linear_entropy, von_neumann_entropy
from bell_entropy.errors import DomainError
from bell_entropy.numkit import ComplexMatrix, dagger, kron
from bell_entropy.regions import LN2, RegionId, lower_bound, upper_bound
from bell_entropy.states import DensityMatrix, mix, partial_trace, rotated_singlet, validate_density

Pair = tuple[int, int]

XI1_SCAN_POINTS = 257
ROOT_XTOL = 1e-14


@dataclass(frozen=True)
class GibbsParams:
    lam: float
    mu: float
    nu: float
    log_z: float

    @property
    def z(self) -> float:
        """4 cosh(lam mu) cosh(lam nu); inf once it overflows a double."""
        return math.exp(self.log_z) if self.log_z < 709.0 else math.inf


@dataclass(frozen=True)
class CurvePoint:
    beta_val: float
    entropy_val: float
    lambda_param: float


def xi2_of(xi1: float) -> float:
    return math.sqrt(max(0.0, 8.0 - xi1 * xi1))


def _check_xi1(xi1: float) -> None:
    if not 2.0 - 1e-12 <= xi1 <= TSIRELSON + 1e-12:
        raise DomainError(f"xi1 must lie in [2, 2*sqrt(2)], got {xi1}")


def _mu_nu(xi1: float, xi2: float) -> tuple[float, float]:
    return 0.5 * (xi1 + xi2), 0.5 * (xi1 - xi2)


def _check_pair(pair: Pair) -> None:
    i, j = pair
    if i == j or not (0 <= i < 4 and 0 <= j < 4):
        raise DomainError(f"pair must name two distinct indices in 0..3, got {pair}")


def bell_diagonal(weights: Sequence[float], b: BellOperator) -> DensityMatrix:
    """sum_k w_k |psi_k><psi_k| in the Bell basis of b."""
    v = bell_basis(b).vectors
    return validate_density((v * np.asarray(weights, dtype=np.float64)) @ dagger(v))


def lambda1_state(alpha: float, b: BellOperator, pair: Pair = (0, 1)) -> DensityMatrix:
    """Weight (1+alpha)/4 on the two listed eigenvectors, (1-alpha)/4 on the others.

    Linear S12 = 3/4 - alpha^2/4; beta = alpha (e_i + e_j)/2.
    """
    if not -1.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [-1, 1], got {alpha}")
    _check_pair(pair)
    weights = [(1.0 - alpha) / 4.0] * 4
    for k in pair:
        weights[k] = (1.0 + alpha) / 4.0
    return bell_diagonal(weights, b)


def lambda2_state(r: float, b: BellOperator, pair: Pair = (0, 1)) -> DensityMatrix:
    """Weight r on pair[0] and 1-r on pair[1].

    Linear S12 = 2r(1-r); beta = r e_i + (1-r) e_j.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    _check_pair(pair)
    weights = [0.0] * 4
    weights[pair[0]] = r
    weights[pair[1]] = 1.0 - r
    return bell_diagonal(weights, b)


def _ln_cosh(x: float) -> float:
    return float(np.logaddexp(x, -x)) - LN2


def log_partition(lam: float, xi1: float) -> float:
    """ln Z(lam) for the Bell operator with top eigenvalue xi1."""
    _check_xi1(xi1)
    mu, nu = _mu_nu(xi1, xi2_of(xi1))
    return 2.0 * LN2 + _ln_cosh(lam * mu) + _ln_cosh(lam * nu)


def gibbs_state(lam: float, b: BellOperator) -> tuple[DensityMatrix, GibbsParams]:
    """exp(lam B)/Z assembled from the Bell basis of b."""
    xi1, xi2 = b.xi
    if not math.isfinite(lam) or abs(lam) * xi1 > GIBBS_OVERFLOW:
        raise DomainError(f"|lambda| * xi1 must not exceed {GIBBS_OVERFLOW}, got lambda={lam}")
    exponents = lam * np.array(b.spectrum)
    if abs(lam) * xi1 > GIBBS_SHIFT:
        exponents = exponents - exponents.max()
    weights = np.exp(exponents)
    weights = weights / weights.sum()
    mu, nu = _mu_nu(xi1, xi2)
    params = GibbsParams(lam=lam, mu=mu, nu=nu, log_z=2.0 * LN2 + _ln_cosh(lam * mu) + _ln_cosh(lam * nu))
    return bell_diagonal(weights, b), params


def gibbs_curve(xi1: float, lambda_grid: Iterable[float]) -> list[CurvePoint]:
    """(beta, S12) of the Gibbs family, evaluated in closed form."""
    _check_xi1(xi1)
    mu, nu = _mu_nu(xi1, xi2_of(xi1))
    points = []
    for lam in lambda_grid:
        lam = float(lam)
        if not math.isfinite(lam):
            raise DomainError(f"lambda must be finite, got {lam}")
        b = mu * math.tanh(lam * mu) + nu * math.tanh(lam * nu)
        s = 2.0 * LN2 + _ln_cosh(lam * mu) + _ln_cosh(lam * nu) - lam * b
        points.append(CurvePoint(beta_val=b, entropy_val=max(0.0, s), lambda_param=lam))
    return points


def gibbs_beta(lam: float, xi1: float) -> float:
    return gibbs_curve(xi1, [lam])[0].beta_val


def lambda_for_beta(beta_val: float, xi1: float) -> float:
    """lam whose Gibbs state has the requested beta (bisection on the closed form)."""
    _check_xi1(xi1)
    if abs(beta_val) >= xi1:
        raise DomainError(f"|beta| must be below xi1={xi1}, got {beta_val}")
    if beta_val == 0.0:
        return 0.0
    limit = GIBBS_OVERFLOW / xi1
    hi = 1.0
    while abs(gibbs_beta(math.copysign(hi, beta_val), xi1)) < abs(beta_val):
        if hi >= limit:
            raise DomainError(f"beta={beta_val} needs |lambda| beyond the overflow guard")
        hi = min(2.0 * hi, limit)
    lo, hi = (0.0, hi) if beta_val > 0 else (-hi, 0.0)
    return float(bisect(lambda lam: gibbs_beta(lam, xi1) - beta_val, lo, hi, xtol=ROOT_XTOL))


def canonical_bell() -> BellOperator:
    return build_bell(*canonical_settings())


def rho_prime(rho: DensityMatrix) -> ComplexMatrix:
    """rho - I(x)rho2/2 - rho1(x)I/2 + I/2; Hermitian with unit trace, not always positive."""
    eye2 = np.eye(2, dtype=np.complex128)
    r1 = partial_trace(rho, 1).mat
    r2 = partial_trace(rho, 2).mat
    return rho.mat - 0.5 * kron(eye2, r2) - 0.5 * kron(r1, eye2) + 0.5 * np.eye(4, dtype=np.complex128)


# --- constructive attainment ------------------------------------------------

AttainStatus = Literal["reached", "unreachable", "invalid"]


@dataclass(frozen=True, eq=False)
class AttainResult:
    region: RegionId
    target: tuple[float, float]
    status: AttainStatus
    achieved: tuple[float, float] | None = None
    construction: str = ""
    state: DensityMatrix | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "region": self.region.value,
            "target": list(self.target),
            "status": self.status,
            "achieved": list(self.achieved) if self.achieved else None,
            "construction": self.construction,
        }


def _spectrum(xi1: float) -> tuple[float, float, float, float]:
    xi2 = xi2_of(xi1)
    return (xi1, xi2, -xi2, -xi1)


def _branches(s0: float) -> list[tuple[str, float, Pair]]:
    """Every (family, parameter, pair) whose linear S12 equals s0."""
    branches = []
    if s0 >= 0.5 - 1e-15:
        a = math.sqrt(max(0.0, 3.0 - 4.0 * s0))
        for alpha in (a, -a):
            for pair in combinations(range(4), 2):
                branches.append(("lambda1", min(1.0, alpha), pair))
    if s0 <= 0.5 + 1e-15:
        r = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 2.0 * s0)))
        for pair in permutations(range(4), 2):
            branches.append(("lambda2", r, pair))
    return branches


def _branch_beta(family: str, param: float, pair: Pair, xi1: float) -> float:
    e = _spectrum(xi1)
    i, j = pair
    if family == "lambda1":
        return param * (e[i] + e[j]) / 2.0
    return param * e[i] + (1.0 - param) * e[j]


def _solve_xi1(family: str, param: float, pair: Pair, beta0: float) -> float | None:
    grid = np.linspace(2.0, TSIRELSON, XI1_SCAN_POINTS)
    values = [_branch_beta(family, param, pair, float(x)) - beta0 for x in grid]
    for k, f in enumerate(values):
        if abs(f) <= 1e-13:
            return float(grid[k])
        if k and values[k - 1] * f < 0.0:
            return float(brentq(lambda x: _branch_beta(family, param, pair, x) - beta0, grid[k - 1], grid[k], xtol=ROOT_XTOL))
    return None


def region_point(region: RegionId, rho: DensityMatrix, b: BellOperator) -> tuple[float, float]:
    """(beta, entropy coordinate of region) for rho under b."""
    if region in (RegionId.LINEAR_TOTAL, RegionId.LINEAR_COND_SUM):
        report = linear_entropy(rho)
        value = report.s12 if region is RegionId.LINEAR_TOTAL else report.cond_sum
    else:
        report = von_neumann_entropy(rho)
        value = report.s12 if region is RegionId.VN_TOTAL else report.cond_sum
    return beta(rho, b), value


def attain_linear(region: RegionId, beta0: float, value0: float, tol: float = ATTAIN_TOL) -> AttainResult:
    """Reach (beta0, value0) in a linear region with a Bell-diagonal state."""
    # Bell-diagonal marginals are I/2, so condSum = 2 S12 - 1
    s0 = value0 if region is RegionId.LINEAR_TOTAL else (value0 + 1.0) / 2.0
    for family, param, pair in _branches(s0):
        xi1 = _solve_xi1(family, param, pair, beta0)
        if xi1 is None:
            continue
        b = build_bell(*settings_for_xi1(xi1))
        if family == "lambda1":
            rho = lambda1_state(param, b, pair)
        else:
            rho = lambda2_state(param, b, pair)
        achieved = region_point(region, rho, b)
        if abs(achieved[0] - beta0) <= tol and abs(achieved[1] - value0) <= tol:
            return AttainResult(
                region=region,
                target=(beta0, value0),
                status="reached",
                achieved=achieved,
                construction=f"{family}(param={param!r}, pair={pair}, xi1={xi1!r})",
                state=rho,
            )
    debug("extremal", f"no Bell-diagonal branch reaches {region.value} ({beta0!r}, {value0!r})")
    return AttainResult(region=region, target=(beta0, value0), status="unreachable")


def attain_von_neumann(region: RegionId, beta0: float, value0: float, tol: float = ATTAIN_TOL) -> AttainResult:
    """Reach (beta0, value0) in a von Neumann region.

    Mixes the maximal-entropy Gibbs state at beta0 with a rotated singlet of
    the same beta under the xi1 = 2 sqrt2 operator. beta is constant along the
    path and S12 runs from 0 up to the boundary value.
    """
    # both endpoints have I/2 marginals, so condSum = 2 S12 - 2 ln2
    s0 = value0 if region is RegionId.VN_TOTAL else (value0 + 2.0 * LN2) / 2.0
    b = canonical_bell()
    gibbs, _ = gibbs_state(lambda_for_beta(beta0, TSIRELSON), b)
    pure = rotated_singlet(math.acos(max(-1.0, min(1.0, -beta0 / TSIRELSON))))

    def along(t: float) -> DensityMatrix:
        return mix([pure, gibbs], [1.0 - t, t])

    def gap(t: float) -> float:
        return von_neumann_entropy(along(t)).s12 - s0

    if gap(0.0) > 0.0 or gap(1.0) < 0.0:
        debug("extremal", f"target entropy {s0!r} is off the mixing path at beta={beta0!r}")
        return AttainResult(region=region, target=(beta0, value0), status="unreachable")
    t = float(brentq(gap, 0.0, 1.0, xtol=ROOT_XTOL))
    rho = along(t)
    achieved = region_point(region, rho, b)
    status: AttainStatus = (
        "reached" if abs(achieved[0] - beta0) <= tol and abs(achieved[1] - value0) <= tol else "unreachable"
    )
    return AttainResult(
        region=region,
        target=(beta0, value0),
        status=status,
        achieved=achieved,
        construction=f"mix(rotated_singlet, gibbs; t={t!r})",
        state=rho,
    )


def attain_target(
    region: RegionId,
    beta0: float,
    value0: float,
    eps: float = ATTAIN_DEPTH,
    tol: float = ATTAIN_TOL,
) -> AttainResult:
    """Construct a state at (beta0, value0) when the point is at least eps inside the region."""
    try:
        upper = upper_bound(region, beta0)
    except DomainError:
        return AttainResult(region=region, target=(beta0, value0), status="invalid")
    if value0 - lower_bound(region) < eps or upper - value0 < eps:
        return AttainResult(region=region, target=(beta0, value0), status="invalid")
    if region in (RegionId.LINEAR_TOTAL, RegionId.LINEAR_COND_SUM):
        return attain_linear(region, beta0, value0, tol)
    return attain_von_neumann(region, beta0, value0, tol)
