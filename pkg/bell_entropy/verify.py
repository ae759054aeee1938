"""Monte Carlo and constructive checks of the compatibility regions.

Every suite draws sample k from derive_rng(seed, k) and reduces results in
index order, so reports are identical for any thread count.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from scipy.optimize import bisect

from bell_entropy.bell import (
    SIGMA_0,
    TSIRELSON,
    BellOperator,
    ChObservables,
    bell_basis,
    build_bell,
    ch_translate,
    cross_norm,
    maximize_beta,
    projector_from_bloch,
    random_bell,
    random_bloch,
    settings_for_xi1,
)
from bell_entropy.config import (
    ATTAIN_DEPTH,
    ATTAIN_TOL,
    DEFAULT_RESTARTS,
    EXTREMAL_CUBIC,
    EXTREMAL_EPS,
    INEQUALITY_TOL,
    MEMBERSHIP_TOL,
    log,
)
from bell_entropy.entropy import entropy_inequality_check, linear_entropy, von_neumann_entropy
from bell_entropy.errors import InvalidStateError
from bell_entropy.extremal import (
    attain_target,
    canonical_bell,
    gibbs_curve,
    gibbs_state,
    log_partition,
)
from bell_entropy.numkit import dagger, frobenius, hermitian_eigen, kron
from bell_entropy.regions import LN2, RegionId, beta_grid, classify, lower_bound, upper_bound
from bell_entropy.states import derive_rng, sample_density, sample_separable, singlet, validate_density

T = TypeVar("T")

BETA_CEILING_TOL = 1e-6
SECOND_VARIATION_RTOL = 0.05
WITNESS_MIN_BETA = 2.1
EXTREMAL_LAMBDAS = (0.1, 0.3, 0.5, 0.8, 1.2)
EXTREMAL_XI1 = (2.2, TSIRELSON)


@dataclass
class VerificationReport:
    suite: str
    samples: int = 0
    violations: int = 0
    worst_margin: float | None = None
    seed: int = 0
    elapsed: float = 0.0
    failures: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "samples": self.samples,
            "violations": self.violations,
            "worstMargin": self.worst_margin,
            "seed": self.seed,
            "elapsed": self.elapsed,
            "passed": self.passed,
            "failures": self.failures,
            "details": self.details,
        }


@dataclass(frozen=True)
class Check:
    """One checked sample: slack to its failure threshold, failure record if it failed."""
    margin: float
    failure: dict | None = None


def _check(margin: float, record: dict) -> Check:
    return Check(margin=margin, failure=None if margin >= 0.0 else record)


def _parallel_map(fn: Callable[[int], T], indices: Iterable[int], threads: int = 1) -> list[T]:
    if threads <= 1:
        return [fn(k) for k in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, indices))


def _fold(report: VerificationReport, checks: Sequence[Check]) -> VerificationReport:
    for c in checks:
        report.samples += 1
        if report.worst_margin is None or c.margin < report.worst_margin:
            report.worst_margin = c.margin
        if c.failure is not None:
            report.violations += 1
            report.failures.append(c.failure)
    return report


def _report(suite: str, seed: int, started: float, checks: Sequence[Check], **details) -> VerificationReport:
    report = _fold(VerificationReport(suite=suite, seed=seed), checks)
    report.details.update(details)
    report.elapsed = time.perf_counter() - started
    return report


# --- region containment -----------------------------------------------------

def mc_region_containment(
    n: int,
    seed: int = 0,
    rank_mix: Sequence[int] = (1, 2, 3, 4),
    membership_tol: float = MEMBERSHIP_TOL,
    threads: int = 1,
) -> VerificationReport:
    """Random (rho, B) pairs must land inside all four regions."""
    started = time.perf_counter()

    def one(k: int) -> list[Check]:
        rng = derive_rng(seed, k)
        rank = int(rng.choice(rank_mix))
        rho = sample_density(rng, rank)
        b = random_bell(rng)
        checks = []
        for v in classify(rho, b, membership_tol):
            record = {"sample": k, "rank": rank, **v.to_dict()}
            checks.append(Check(margin=v.margin, failure=None if v.inside else record))
        return checks

    per_sample = _parallel_map(one, range(n), threads)
    return _report("regions", seed, started, [c for cs in per_sample for c in cs], rankMix=list(rank_mix))


# --- attainability ----------------------------------------------------------

def attainability_sweep(
    region: RegionId,
    grid_n: int,
    eps: float = ATTAIN_DEPTH,
    tol: float = ATTAIN_TOL,
    threads: int = 1,
) -> VerificationReport:
    """Every grid point at depth >= eps inside the region must be constructible."""
    started = time.perf_counter()
    betas = beta_grid(grid_n)
    values = np.linspace(lower_bound(region), upper_bound(region, 0.0), grid_n)
    targets = [(float(b), float(v)) for b in betas for v in values]

    results = _parallel_map(lambda k: attain_target(region, *targets[k], eps=eps, tol=tol), range(len(targets)), threads)
    checks = []
    invalid = 0
    for res in results:
        if res.status == "invalid":
            invalid += 1
            continue
        if res.status == "reached":
            err = max(abs(res.achieved[0] - res.target[0]), abs(res.achieved[1] - res.target[1]))
            checks.append(Check(margin=tol - err))
        else:
            checks.append(Check(margin=-math.inf, failure=res.to_dict()))
    return _report(f"attain:{region.value}", 0, started, checks, gridN=grid_n, skippedOutside=invalid)


def vn_boundary_check(n: int, lambda_max: float = 10.0) -> list[Check]:
    """Gibbs curve of the xi1 = 2 sqrt2 operator lies on the von Neumann boundary."""
    checks = []
    for point in gibbs_curve(TSIRELSON, np.linspace(-lambda_max, lambda_max, n)):
        err = abs(point.entropy_val - upper_bound(RegionId.VN_TOTAL, point.beta_val))
        checks.append(_check(1e-10 - err, {"lambda": point.lambda_param, "beta": point.beta_val, "error": err}))
    return checks


# --- Gibbs extremality ------------------------------------------------------

def _random_hermitian(rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return 0.5 * (g + dagger(g))


def project_constraints(delta: np.ndarray, b: BellOperator) -> np.ndarray:
    """Remove the components along I and B (Tr delta = 0, Tr(B delta) = 0)."""
    delta = delta - (np.trace(delta).real / 4.0) * np.eye(4)
    return delta - (np.trace(b.mat @ delta).real / 16.0) * b.mat


def gibbs_extremality_test(
    b: BellOperator,
    lam: float,
    n_perturbations: int,
    eps: float = EXTREMAL_EPS,
    seed: int = 0,
    threads: int = 1,
) -> VerificationReport:
    """Perturbations keeping trace and beta fixed must not raise S12 or condSum past c eps^3."""
    if eps > 1e-3:
        raise ValueError(f"eps must be <= 1e-3, got {eps}")
    started = time.perf_counter()
    rho, _ = gibbs_state(lam, b)
    base = von_neumann_entropy(rho)
    allowance = EXTREMAL_CUBIC * eps ** 3

    def one(k: int) -> list[Check] | None:
        rng = derive_rng(seed, k)
        delta = project_constraints(_random_hermitian(rng), b)
        norm = frobenius(delta)
        if norm > 0.0:
            delta = delta * (eps / norm)
        try:
            moved = von_neumann_entropy(validate_density(rho.mat + delta))
        except InvalidStateError:
            return None
        record = {"perturbation": k, "lambda": lam, "xi1": b.xi[0]}
        return [
            _check(allowance - (moved.s12 - base.s12), {**record, "quantity": "s12", "rise": moved.s12 - base.s12}),
            _check(
                allowance - (moved.cond_sum - base.cond_sum),
                {**record, "quantity": "condSum", "rise": moved.cond_sum - base.cond_sum},
            ),
        ]

    results = _parallel_map(one, range(n_perturbations), threads)
    checks = [c for cs in results if cs is not None for c in cs]
    skipped = sum(1 for cs in results if cs is None)
    return _report("extremal", seed, started, checks, skippedInvalid=skipped, eps=eps)


def second_variation_test(b: BellOperator, lam: float, h: float | None = None) -> VerificationReport:
    """Half second difference of S12 against -Tr(rho^-1 drho^2)/2.

    The direction is Bell-diagonal with weights (1, -1, -1, 1), which keeps
    both the trace and beta fixed and commutes with rho.
    """
    started = time.perf_counter()
    rho, _ = gibbs_state(lam, b)
    v = bell_basis(b).vectors
    weights = np.real(np.diag(dagger(v) @ rho.mat @ v))
    if h is None:
        h = 1e-2 * float(weights.min())
    delta = h * (v * np.array([1.0, -1.0, -1.0, 1.0])) @ dagger(v)

    def s(m: np.ndarray) -> float:
        return von_neumann_entropy(validate_density(m)).s12

    measured = 0.5 * (s(rho.mat + delta) - 2.0 * s(rho.mat) + s(rho.mat - delta))
    inverse = (v / weights) @ dagger(v)
    predicted = -0.5 * float(np.real(np.trace(inverse @ delta @ delta)))
    rel = abs(measured - predicted) / abs(predicted)
    record = {"lambda": lam, "xi1": b.xi[0], "measured": measured, "predicted": predicted}
    checks = [_check(SECOND_VARIATION_RTOL - rel, record), _check(-measured, {**record, "sign": "positive"})]
    return _report("second-variation", 0, started, checks, h=h)


# --- implication chain ------------------------------------------------------

def _rejection_sample(seed: int, k: int, accept: Callable, max_attempts: int):
    rng = derive_rng(seed, k)
    for _ in range(max_attempts):
        rho = sample_density(rng, 4)
        report = linear_entropy(rho)
        if accept(report):
            return rho
    return None


def vn_cond_witness(restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> dict:
    """Gibbs state with von Neumann condSum >= 0 that still violates CHSH.

    condSum = 2 S12 - 2 ln2 along the Gibbs family, so condSum >= 0 means
    S12 >= ln2.
    """
    target = LN2 + 1e-9

    def gap(lam: float) -> float:
        return gibbs_curve(TSIRELSON, [lam])[0].entropy_val - target

    lam = float(bisect(gap, 0.0, 50.0, xtol=1e-14))
    # keep the entropy on the non-negative side of the bisection bracket
    while gap(lam) < 0.0:
        lam = math.nextafter(lam, 0.0)
    rho, _ = gibbs_state(lam, canonical_bell())
    report = von_neumann_entropy(rho)
    beta_max, _ = maximize_beta(rho, restarts=restarts, seed=seed)
    return {"lambda": lam, "condSum": report.cond_sum, "s12": report.s12, "betaMax": beta_max}


def implication_chain_test(
    n: int,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    threads: int = 1,
    max_attempts: int = 50,
) -> VerificationReport:
    """Separable => entropy inequalities; linear thresholds => no violation; vN condSum does not imply."""
    started = time.perf_counter()

    def separable(k: int) -> Check:
        _, rho = sample_separable(derive_rng(seed, k))
        report = linear_entropy(rho)
        holds = entropy_inequality_check(report)
        slack = min(report.s12 - report.s1, report.s12 - report.s2) + INEQUALITY_TOL
        return Check(margin=slack, failure=None if all(holds) else {"part": "separable", "sample": k, **report.to_dict()})

    def below_ceiling(part: str, offset: int, accept: Callable) -> Callable[[int], Check]:
        def one(k: int) -> Check:
            rho = _rejection_sample(seed, offset + k, accept, max_attempts)
            if rho is None:
                return Check(margin=-math.inf, failure={"part": part, "sample": k, "reason": "no accepted state"})
            beta_max, _ = maximize_beta(rho, restarts=restarts, seed=seed + k)
            margin = 2.0 + BETA_CEILING_TOL - beta_max
            return _check(margin, {"part": part, "sample": k, "betaMax": beta_max})
        return one

    checks = _parallel_map(separable, range(n), threads)
    checks += _parallel_map(below_ceiling("linearEntropy", n, lambda r: r.s12 >= 0.5), range(n), threads)
    checks += _parallel_map(below_ceiling("linearCondSum", 2 * n, lambda r: r.cond_sum >= 0.0), range(n), threads)

    witness = vn_cond_witness(restarts, seed)
    found = witness["condSum"] >= 0.0 and witness["betaMax"] >= WITNESS_MIN_BETA
    checks.append(Check(
        margin=witness["betaMax"] - WITNESS_MIN_BETA,
        failure=None if found else {"part": "vnCondWitness", **witness},
    ))
    return _report("implications", seed, started, checks, witness=witness)


# --- operator identities ----------------------------------------------------

def bell_identity_test(n: int, seed: int = 0, threads: int = 1) -> VerificationReport:
    """Trace identities, closed-form spectrum and eigenbasis residuals of random Bell operators."""
    started = time.perf_counter()

    def one(k: int) -> list[Check]:
        b = random_bell(derive_rng(seed, k))
        xi1, xi2 = b.xi
        v1, w1, v2, w2 = b.settings
        cross = cross_norm(v1, w1) * cross_norm(v2, w2)
        a1, b1, a2, b2 = (v.as_operator() for v in b.settings)
        square = 4.0 * np.eye(4) - kron(a1 @ b1 - b1 @ a1, a2 @ b2 - b2 @ a2)
        numeric = hermitian_eigen(b.mat).values
        closed = np.sort(np.array(b.spectrum))
        basis = bell_basis(b)
        residual = max(
            float(np.linalg.norm(b.mat @ basis.vectors[:, j] - basis.eigenvalues[j] * basis.vectors[:, j]))
            for j in range(4)
        )
        gram = frobenius(dagger(basis.vectors) @ basis.vectors - np.eye(4))
        errors = {
            "trace": (abs(np.trace(b.mat)), 1e-12),
            "traceSquare": (abs(np.trace(b.mat @ b.mat).real - 16.0), 1e-10),
            "xiSquares": (abs(xi1 * xi1 + xi2 * xi2 - 8.0), 1e-10),
            "crossProduct": (abs(xi1 * xi1 - 4.0 - 4.0 * cross), 1e-10),
            "spectrum": (float(np.max(np.abs(numeric - closed))), 1e-9),
            "square": (frobenius(b.mat @ b.mat - square), 1e-10),
            "eigenResidual": (residual, 1e-9),
            "gram": (gram, 1e-10),
        }
        return [_check(tol - err, {"sample": k, "check": name, "error": err}) for name, (err, tol) in errors.items()]

    checks = [c for cs in _parallel_map(one, range(n), threads) for c in cs]
    return _report("bell", seed, started, checks)


def boundary_consistency_test(n: int, seed: int = 0, threads: int = 1) -> VerificationReport:
    """Closed-form Gibbs curves against the boundary, the matrix path and d lnZ/d lambda."""
    started = time.perf_counter()
    checks = vn_boundary_check(n)

    def one(k: int) -> list[Check]:
        rng = derive_rng(seed, k)
        b = random_bell(rng)
        lam = float(rng.uniform(-3.0, 3.0))
        rho, params = gibbs_state(lam, b)
        point = gibbs_curve(b.xi[0], [lam])[0]
        report = von_neumann_entropy(rho)
        matrix_beta = float(np.real(np.trace(rho.mat @ b.mat)))
        h = 1e-5
        derivative = (log_partition(lam + h, b.xi[0]) - log_partition(lam - h, b.xi[0])) / (2.0 * h)
        record = {"sample": k, "lambda": lam, "xi1": b.xi[0]}
        return [
            _check(1e-9 - abs(report.s12 - point.entropy_val), {**record, "check": "entropy"}),
            _check(1e-9 - abs(matrix_beta - point.beta_val), {**record, "check": "beta"}),
            _check(1e-7 - abs(derivative - point.beta_val), {**record, "check": "dlnZ"}),
            _check(1e-10 - abs(report.cond_sum - (2.0 * report.s12 - 2.0 * LN2)), {**record, "check": "condSum"}),
            _check(1e-10 * params.z - abs(params.z - 4.0 * math.cosh(lam * params.mu) * math.cosh(lam * params.nu)),
                   {**record, "check": "partition"}),
        ]

    checks += [c for cs in _parallel_map(one, range(n), threads) for c in cs]

    # no operator with xi1 < 2 sqrt2 produces a curve above the boundary
    for xi1 in np.linspace(2.0, TSIRELSON, 9):
        for point in gibbs_curve(float(xi1), np.linspace(-10.0, 10.0, max(2, n))):
            checks.append(_check(
                1e-10 + upper_bound(RegionId.VN_TOTAL, point.beta_val) - point.entropy_val,
                {"check": "highestCurve", "xi1": float(xi1), "lambda": point.lambda_param},
            ))
    return _report("boundary", seed, started, checks)


def ch_identity_test(n: int, seed: int = 0, threads: int = 1) -> VerificationReport:
    """beta = 4 CH_right - 4 CH_left + 2 and (beta <= 2) <=> (CH_right <= CH_left)."""
    started = time.perf_counter()

    def one(k: int) -> list[Check]:
        rng = derive_rng(seed, k)
        rho = sample_density(rng, int(rng.integers(1, 5)))
        ch = ChObservables(*(projector_from_bloch(random_bloch(rng)) for _ in range(4)))
        chsh, left, right = ch_translate(rho, ch)
        residual = abs(chsh - (4.0 * right - 4.0 * left + 2.0))
        record = {"sample": k, "beta": chsh, "chLeft": left, "chRight": right}
        checks = [_check(1e-12 - residual, {**record, "check": "identity"})]
        if abs(chsh - 2.0) > 1e-12:
            agree = (chsh <= 2.0) == (right <= left)
            checks.append(Check(margin=abs(chsh - 2.0), failure=None if agree else {**record, "check": "sign"}))
        return checks

    checks = [c for cs in _parallel_map(one, range(n), threads) for c in cs]
    chsh, left, right = ch_translate(singlet(), ChObservables(SIGMA_0, SIGMA_0, SIGMA_0, SIGMA_0))
    checks.append(_check(1e-12 - abs(chsh - 2.0) - abs(left - right), {"check": "deterministic", "beta": chsh}))
    return _report("ch", seed, started, checks)


def tsirelson_test(n: int, seed: int = 0, restarts: int = DEFAULT_RESTARTS, threads: int = 1) -> VerificationReport:
    """maximize_beta never exceeds 2 sqrt2 and reaches it on the singlet."""
    started = time.perf_counter()

    def one(k: int) -> Check:
        rng = derive_rng(seed, k)
        rho = sample_density(rng, int(rng.integers(1, 5)))
        beta_max, _ = maximize_beta(rho, restarts=restarts, seed=seed + k)
        return _check(TSIRELSON + 1e-9 - beta_max, {"sample": k, "betaMax": beta_max})

    checks = _parallel_map(one, range(n), threads)
    beta_max, _ = maximize_beta(singlet(), restarts=restarts, seed=seed)
    checks.append(_check(beta_max - (TSIRELSON - BETA_CEILING_TOL), {"check": "singlet", "betaMax": beta_max}))
    return _report("tsirelson", seed, started, checks, singletBetaMax=beta_max)


# --- suite runner -----------------------------------------------------------

SUITES = ("regions", "attain", "extremal", "implications", "bell", "boundary", "ch", "tsirelson")


def _merge(into: VerificationReport, part: VerificationReport) -> None:
    into.samples += part.samples
    into.violations += part.violations
    into.failures += part.failures
    if part.worst_margin is not None and (into.worst_margin is None or part.worst_margin < into.worst_margin):
        into.worst_margin = part.worst_margin


def _extremal_suite(samples: int, seed: int, threads: int) -> VerificationReport:
    started = time.perf_counter()
    per_combo = max(1, samples // (len(EXTREMAL_LAMBDAS) * len(EXTREMAL_XI1)))
    merged = VerificationReport(suite="extremal", seed=seed)
    skipped = 0
    combo = 0
    for xi1 in EXTREMAL_XI1:
        b = build_bell(*settings_for_xi1(xi1))
        for lam in EXTREMAL_LAMBDAS:
            part = gibbs_extremality_test(b, lam, per_combo, seed=seed + combo, threads=threads)
            skipped += part.details["skippedInvalid"]
            _merge(merged, part)
            _merge(merged, second_variation_test(b, lam))
            combo += 1
    merged.details = {"perCombination": per_combo, "combinations": combo, "skippedInvalid": skipped}
    merged.elapsed = time.perf_counter() - started
    return merged


def _attain_suite(grid_n: int, threads: int) -> VerificationReport:
    started = time.perf_counter()
    merged = VerificationReport(suite="attain")
    # each von Neumann point needs a root solve over matrix entropies
    vn_grid = max(2, grid_n // 4)
    for region in RegionId:
        n = grid_n if region in (RegionId.LINEAR_TOTAL, RegionId.LINEAR_COND_SUM) else vn_grid
        part = attainability_sweep(region, n, threads=threads)
        merged.details[region.value] = {"gridN": n, "samples": part.samples, "violations": part.violations}
        _merge(merged, part)
    _fold(merged, vn_boundary_check(grid_n))
    merged.elapsed = time.perf_counter() - started
    return merged


def run_suite(
    name: str,
    samples: int,
    seed: int = 0,
    grid_n: int = 50,
    threads: int = 1,
    membership_tol: float = MEMBERSHIP_TOL,
    restarts: int = DEFAULT_RESTARTS,
) -> list[VerificationReport]:
    """Run one suite (or 'all'); samples == 0 gives empty passing reports."""
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in SUITES:
            raise ValueError(f"Unknown suite: {n}")
    reports = []
    for n in names:
        if samples == 0:
            reports.append(VerificationReport(suite=n, seed=seed))
            continue
        if n == "regions":
            report = mc_region_containment(samples, seed, membership_tol=membership_tol, threads=threads)
        elif n == "attain":
            report = _attain_suite(grid_n, threads)
        elif n == "extremal":
            report = _extremal_suite(samples, seed, threads)
        elif n == "implications":
            report = implication_chain_test(samples, seed, restarts, threads)
        elif n == "bell":
            report = bell_identity_test(samples, seed, threads)
        elif n == "boundary":
            report = boundary_consistency_test(samples, seed, threads)
        elif n == "ch":
            report = ch_identity_test(samples, seed, threads)
        else:
            report = tsirelson_test(samples, seed, restarts, threads)
        report.seed = seed
        log("verify", f"suite={n} samples={report.samples} violations={report.violations} "
                      f"worst_margin={report.worst_margin!r} elapsed={report.elapsed:.2f}s")
        reports.append(report)
    return reports
