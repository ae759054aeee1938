"""Two-qubit density matrices: validation, reduction, sampling and JSON I/O."""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
import numpy.typing as npt

from bell_entropy.config import (
    DEFAULT_SEPARABLE_TERMS,
    HERMITIAN_TOL,
    POSITIVITY_TOL,
    TRACE_TOL,
)
from bell_entropy.errors import InvalidStateError, MalformedInputError
from bell_entropy.numkit import (
    ComplexMatrix,
    as_matrix,
    dagger,
    frobenius,
    hermitian_eigen,
    is_hermitian,
    kron,
)

Subsystem = Literal[1, 2]
SeedLike = int | np.random.Generator


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated two-qubit state; spectrum is ascending and clamped at zero."""
    mat: ComplexMatrix
    spectrum: npt.NDArray[np.float64]

    def to_json(self) -> dict:
        return density_to_json(self)


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    """Validated single-qubit state."""
    mat: ComplexMatrix
    spectrum: npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class SeparableSample:
    """Convex decomposition sum_k w_k rho_1k (x) rho_2k."""
    weights: tuple[float, ...]
    factors: tuple[tuple[ReducedDensity, ReducedDensity], ...]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _validate(m: ComplexMatrix, dim: int) -> tuple[ComplexMatrix, npt.NDArray[np.float64]]:
    a = as_matrix(m, dims=(dim,))
    if not is_hermitian(a, HERMITIAN_TOL):
        raise InvalidStateError(f"State is not Hermitian (||rho - rho^dagger|| = {frobenius(a - dagger(a)):.3e})")
    trace = complex(np.trace(a))
    if abs(trace - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"State trace is {trace.real:.12g}, expected 1")
    a = 0.5 * (a + dagger(a))
    eig = hermitian_eigen(a)
    values = eig.values
    if values[0] < -POSITIVITY_TOL:
        raise InvalidStateError(f"State has negative eigenvalue {values[0]:.3e}")
    if values[0] < 0.0:
        values = np.clip(values, 0.0, None)
        values = values / values.sum()
        a = (eig.vectors * values) @ dagger(eig.vectors)
    return _readonly(a), _readonly(values.copy())


def validate_density(m: ComplexMatrix) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity of a 4x4 matrix.

    Eigenvalues in [-1e-10, 0) are clamped to zero and the matrix is rebuilt
    with unit trace.
    """
    mat, spectrum = _validate(m, 4)
    return DensityMatrix(mat=mat, spectrum=spectrum)


def validate_reduced(m: ComplexMatrix) -> ReducedDensity:
    mat, spectrum = _validate(m, 2)
    return ReducedDensity(mat=mat, spectrum=spectrum)


def partial_trace(rho: DensityMatrix, keep: Subsystem) -> ReducedDensity:
    """Reduced state of qubit `keep` (1 or 2)."""
    r = rho.mat.reshape(2, 2, 2, 2)
    if keep == 1:
        reduced = np.einsum("ikjk->ij", r)
    elif keep == 2:
        reduced = np.einsum("kikj->ij", r)
    else:
        raise ValueError(f"Unknown subsystem: {keep}")
    return validate_reduced(reduced)


# --- constructors -----------------------------------------------------------

def maximally_mixed() -> DensityMatrix:
    return validate_density(np.eye(4) / 4.0)


def pure_state(vec: Sequence[complex]) -> DensityMatrix:
    """Projector onto a (not necessarily normalised) 4-vector."""
    psi = np.asarray(vec, dtype=np.complex128).reshape(4)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise InvalidStateError("Zero vector has no projector")
    psi = psi / norm
    return validate_density(np.outer(psi, np.conj(psi)))


def singlet() -> DensityMatrix:
    """(|01> - |10>)/sqrt(2)."""
    return pure_state([0.0, 1.0, -1.0, 0.0])


def rotated_singlet(theta: float) -> DensityMatrix:
    """Singlet with qubit 2 rotated by `theta` about the y axis.

    Local unitaries keep both marginals at I/2.
    """
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    ry = np.array([[c, -s], [s, c]], dtype=np.complex128)
    psi = kron(np.eye(2), ry) @ np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128)
    return pure_state(psi)


def product_state(r1: ReducedDensity, r2: ReducedDensity) -> DensityMatrix:
    return validate_density(kron(r1.mat, r2.mat))


def mix(states: Sequence[DensityMatrix], weights: Sequence[float]) -> DensityMatrix:
    """Convex combination of states."""
    mat = sum(w * s.mat for w, s in zip(weights, states))
    return validate_density(mat)


# --- sampling ---------------------------------------------------------------

def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_rng(master: int, index: int) -> np.random.Generator:
    """Independent stream `index` of a master seed (SeedSequence hash of both)."""
    return np.random.default_rng([int(master), int(index)])


def _ginibre(rng: np.random.Generator, dim: int, rank: int) -> ComplexMatrix:
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / math.sqrt(2.0)
    w = g @ dagger(g)
    return w / np.trace(w).real


def sample_density(seed: SeedLike, rank: int = 4) -> DensityMatrix:
    """Ginibre-distributed random state of the given rank."""
    if rank not in (1, 2, 3, 4):
        raise ValueError(f"rank must be in 1..4, got {rank}")
    rng = make_rng(seed)
    return validate_density(_ginibre(rng, 4, rank))


def sample_reduced(seed: SeedLike, rank: int = 2) -> ReducedDensity:
    if rank not in (1, 2):
        raise ValueError(f"rank must be 1 or 2, got {rank}")
    rng = make_rng(seed)
    return validate_reduced(_ginibre(rng, 2, rank))


def sample_separable(
    seed: SeedLike,
    terms: int = DEFAULT_SEPARABLE_TERMS,
    pure_factors: bool = False,
) -> tuple[SeparableSample, DensityMatrix]:
    """Random convex mixture of random product states.

    Factor ranks are drawn uniformly from {1, 2} unless `pure_factors`.
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    factors = []
    for _ in range(terms):
        r1 = 1 if pure_factors else int(rng.integers(1, 3))
        r2 = 1 if pure_factors else int(rng.integers(1, 3))
        factors.append((sample_reduced(rng, r1), sample_reduced(rng, r2)))
    mat = sum(w * kron(f1.mat, f2.mat) for w, (f1, f2) in zip(weights, factors))
    sample = SeparableSample(weights=tuple(float(w) for w in weights), factors=tuple(factors))
    return sample, validate_density(mat)


# --- JSON -------------------------------------------------------------------

def density_to_json(rho: DensityMatrix) -> dict:
    return {
        "matrix": [[[float(cell.real), float(cell.imag)] for cell in row] for row in rho.mat]
    }


def density_from_json(payload: dict) -> DensityMatrix:
    """Parse {"matrix": 4 rows x 4 [re, im] entries} and validate it."""
    if not isinstance(payload, dict) or "matrix" not in payload:
        raise MalformedInputError("State document must be an object with key 'matrix'")
    rows = payload["matrix"]
    if not isinstance(rows, list) or len(rows) != 4:
        raise MalformedInputError("'matrix' must have 4 rows")
    mat = np.zeros((4, 4), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise MalformedInputError(f"Row {i} must have 4 entries")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                raise MalformedInputError(f"Entry ({i}, {j}) must be a [re, im] pair of numbers")
            mat[i, j] = complex(cell[0], cell[1])
    if not np.all(np.isfinite(mat)):
        raise MalformedInputError("Matrix entries must be finite")
    return validate_density(mat)


def load_density(path: str | Path) -> DensityMatrix:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"Cannot read state file {path}: {exc}") from exc
    return density_from_json(payload)
