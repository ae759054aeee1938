"""Linear and von Neumann entropies: total, marginal and conditional.

All von Neumann quantities are in nats.
"""

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Literal

import numpy as np
from scipy.special import xlogy

from bell_entropy.config import ENTROPY_CLAMP, INEQUALITY_TOL
from bell_entropy.states import DensityMatrix, ReducedDensity, partial_trace

EntropyKind = Literal["linear", "vonNeumann"]


@dataclass(frozen=True)
class EntropyReport:
    kind: EntropyKind
    s12: float
    s1: float
    s2: float
    cond21: float
    cond12: float
    cond_sum: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data["condSum"] = data.pop("cond_sum")
        return data


def _report(kind: EntropyKind, s12: float, s1: float, s2: float) -> EntropyReport:
    cond21 = s12 - s1
    cond12 = s12 - s2
    return EntropyReport(
        kind=kind,
        s12=s12,
        s1=s1,
        s2=s2,
        cond21=cond21,
        cond12=cond12,
        cond_sum=cond21 + cond12,
    )


Marginals = tuple[ReducedDensity, ReducedDensity]


def marginals(rho: DensityMatrix) -> Marginals:
    """Both single-qubit reductions, for sharing between entropy reports."""
    return partial_trace(rho, 1), partial_trace(rho, 2)


def _purity(mat: np.ndarray) -> float:
    return float(np.real(np.trace(mat @ mat)))


def linear_entropy(rho: DensityMatrix, reduced: Marginals | None = None) -> EntropyReport:
    """S = 1 - Tr(rho^2) for the pair and both marginals."""
    r1, r2 = reduced if reduced is not None else marginals(rho)
    return _report(
        "linear",
        1.0 - _purity(rho.mat),
        1.0 - _purity(r1.mat),
        1.0 - _purity(r2.mat),
    )


def shannon_nats(values: Iterable[float]) -> float:
    """-sum p ln p with 0 ln 0 = 0; values below the clamp count as zero."""
    p = np.fromiter(values, dtype=np.float64)
    p = np.where(p > ENTROPY_CLAMP, p, 0.0)
    return 0.0 - float(np.sum(xlogy(p, p)))


def _vn(state: DensityMatrix | ReducedDensity) -> float:
    return shannon_nats(state.spectrum)


def von_neumann_entropy(rho: DensityMatrix, reduced: Marginals | None = None) -> EntropyReport:
    """S = -Tr(rho ln rho) from the cached spectra."""
    r1, r2 = reduced if reduced is not None else marginals(rho)
    return _report("vonNeumann", _vn(rho), _vn(r1), _vn(r2))


def entropy_report(rho: DensityMatrix, kind: EntropyKind) -> EntropyReport:
    if kind == "linear":
        return linear_entropy(rho)
    if kind == "vonNeumann":
        return von_neumann_entropy(rho)
    raise ValueError(f"Unknown entropy kind: {kind}")


def entropy_inequality_check(report: EntropyReport) -> tuple[bool, bool]:
    """(S12 >= S1, S12 >= S2), each false only when violated by more than 1e-12."""
    return (
        report.s12 - report.s1 >= -INEQUALITY_TOL,
        report.s12 - report.s2 >= -INEQUALITY_TOL,
    )


def nats_to_bits(x: float) -> float:
    return x / math.log(2.0)
