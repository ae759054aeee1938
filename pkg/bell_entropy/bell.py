"""Bell operators built from four Bloch vectors.

B = a1(x)a2 + a1(x)b2 + b1(x)a2 - b1(x)b2 with a = a.sigma. The spectrum is
{xi1, xi2, -xi2, -xi1} where xi1^2 = 4 + 4|a1 x b1||a2 x b2| and
xi2^2 = 4 - 4|a1 x b1||a2 x b2|.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import numpy.typing as npt

from bell_entropy.config import (
    ASCENT_MAX_ITER,
    ASCENT_TOL,
    DEFAULT_RESTARTS,
    DEGENERACY_TOL,
    HERMITIAN_TOL,
    UNIT_TOL,
)
from bell_entropy.errors import InvalidSettingsError, MalformedInputError
from bell_entropy.numkit import ComplexMatrix, as_matrix, dagger, frobenius, hermitian_eigen, kron
from bell_entropy.states import DensityMatrix, SeedLike, derive_rng, make_rng

SIGMA_0 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

TSIRELSON = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
            raise InvalidSettingsError(f"Bloch vector ({self.x}, {self.y}, {self.z}) has norm {norm!r}, expected 1")

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "BlochVector":
        if len(values) != 3:
            raise InvalidSettingsError(f"Bloch vector needs 3 components, got {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "BlochVector":
        v = np.asarray(values, dtype=np.float64)
        return cls.from_sequence(v / np.linalg.norm(v))

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([self.x, self.y, self.z])

    def as_operator(self) -> ComplexMatrix:
        """The dichotomic observable a.sigma."""
        return self.x * SIGMA_X + self.y * SIGMA_Y + self.z * SIGMA_Z


Settings = tuple[BlochVector, BlochVector, BlochVector, BlochVector]


@dataclass(frozen=True, eq=False)
class BellOperator:
    settings: Settings
    mat: ComplexMatrix
    xi: tuple[float, float]

    @property
    def spectrum(self) -> tuple[float, float, float, float]:
        """Closed-form eigenvalues in descending order."""
        xi1, xi2 = self.xi
        return (xi1, xi2, -xi2, -xi1)


@dataclass(frozen=True, eq=False)
class BellBasis:
    """Columns are eigenvectors of B for eigenvalues (xi1, xi2, -xi2, -xi1)."""
    vectors: ComplexMatrix
    eigenvalues: tuple[float, float, float, float]


@dataclass(frozen=True, eq=False)
class ChObservables:
    """0/1-valued projectors A1, B1 (qubit 1) and A2, B2 (qubit 2)."""
    a1: ComplexMatrix
    b1: ComplexMatrix
    a2: ComplexMatrix
    b2: ComplexMatrix

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2"):
            p = as_matrix(getattr(self, name), dims=(2,))
            if frobenius(p - dagger(p)) > HERMITIAN_TOL or frobenius(p @ p - p) > HERMITIAN_TOL:
                raise InvalidSettingsError(f"{name.upper()} is not a Hermitian projector")


def cross_norm(a: BlochVector, b: BlochVector) -> float:
    return float(np.linalg.norm(np.cross(a.as_array(), b.as_array())))


def build_bell(a1: BlochVector, b1: BlochVector, a2: BlochVector, b2: BlochVector) -> BellOperator:
    """Assemble B and its closed-form spectrum from four unit vectors."""
    for v in (a1, b1, a2, b2):
        if not isinstance(v, BlochVector):
            raise InvalidSettingsError(f"Expected BlochVector, got {type(v).__name__}")
    A1, B1, A2, B2 = (v.as_operator() for v in (a1, b1, a2, b2))
    mat = kron(A1, A2) + kron(A1, B2) + kron(B1, A2) - kron(B1, B2)
    # 1 - |a1 x b1||a2 x b2| from the dot products, free of cancellation near 1
    c1 = float(a1.as_array() @ b1.as_array())
    c2 = float(a2.as_array() @ b2.as_array())
    u = min(1.0, c1 * c1 + c2 * c2 - c1 * c1 * c2 * c2)
    gap = u / (1.0 + math.sqrt(1.0 - u))
    xi1 = 2.0 * math.sqrt(2.0 - gap)
    xi2 = 2.0 * math.sqrt(gap)
    mat.setflags(write=False)
    return BellOperator(settings=(a1, b1, a2, b2), mat=mat, xi=(xi1, xi2))


def canonical_settings() -> Settings:
    """x, z for qubit 1 and (x+z)/sqrt2, (x-z)/sqrt2 for qubit 2; xi1 = 2 sqrt2."""
    h = 1.0 / math.sqrt(2.0)
    return (
        BlochVector(1.0, 0.0, 0.0),
        BlochVector(0.0, 0.0, 1.0),
        BlochVector(h, 0.0, h),
        BlochVector(h, 0.0, -h),
    )


def settings_for_xi1(xi1: float) -> Settings:
    """Settings whose Bell operator has the requested top eigenvalue xi1 in [2, 2 sqrt2]."""
    if not 2.0 - 1e-12 <= xi1 <= TSIRELSON + 1e-12:
        raise InvalidSettingsError(f"xi1 must lie in [2, 2*sqrt(2)], got {xi1}")
    product = min(1.0, max(0.0, (xi1 * xi1 - 4.0) / 4.0))
    theta = math.asin(product)
    return (
        BlochVector(1.0, 0.0, 0.0),
        BlochVector(math.cos(theta), 0.0, math.sin(theta)),
        BlochVector(1.0, 0.0, 0.0),
        BlochVector(0.0, 0.0, 1.0),
    )


def random_bloch(rng: np.random.Generator) -> BlochVector:
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return BlochVector.from_sequence(v / norm)


def random_bell(seed: SeedLike) -> BellOperator:
    rng = make_rng(seed)
    return build_bell(*(random_bloch(rng) for _ in range(4)))


def _fix_phase(v: ComplexMatrix) -> ComplexMatrix:
    mags = np.abs(v)
    idx = int(np.flatnonzero(mags >= mags.max() - 1e-8)[0])
    return v * (np.conj(v[idx]) / mags[idx])


def bell_basis(b: BellOperator) -> BellBasis:
    """Eigenvectors of B ordered by descending eigenvalue.

    Inside a degenerate eigenspace the basis is the Gram-Schmidt
    orthonormalisation of the projected reference vectors e1..e4, taken in
    index order.
    """
    eig = hermitian_eigen(b.mat)
    values = eig.values[::-1]
    vecs = eig.vectors[:, ::-1]
    columns: list[ComplexMatrix] = []
    start = 0
    while start < 4:
        stop = start + 1
        while stop < 4 and abs(values[stop] - values[start]) <= DEGENERACY_TOL:
            stop += 1
        block = vecs[:, start:stop]
        if stop - start == 1:
            columns.append(_fix_phase(block[:, 0]))
        else:
            projector = block @ dagger(block)
            chosen: list[ComplexMatrix] = []
            for m in range(4):
                c = projector[:, m].copy()
                for u in chosen:
                    c = c - u * (np.vdot(u, c))
                norm = np.linalg.norm(c)
                if norm > 1e-6:
                    chosen.append(c / norm)
                if len(chosen) == stop - start:
                    break
            columns.extend(_fix_phase(u) for u in chosen)
        start = stop
    vectors = np.column_stack(columns)
    vectors.setflags(write=False)
    return BellBasis(vectors=vectors, eigenvalues=b.spectrum)


def beta(rho: DensityMatrix, b: BellOperator) -> float:
    """CHSH parameter Tr(rho B)."""
    return float(np.real(np.trace(rho.mat @ b.mat)))


def correlation_tensor(rho: DensityMatrix) -> npt.NDArray[np.float64]:
    """T[i, j] = Tr(rho sigma_i (x) sigma_j) for i, j in x, y, z."""
    t = np.empty((3, 3))
    for i, si in enumerate(PAULI):
        for j, sj in enumerate(PAULI):
            t[i, j] = np.real(np.trace(rho.mat @ kron(si, sj)))
    return t


def _unit_or_keep(coeff: npt.NDArray[np.float64], previous: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    norm = np.linalg.norm(coeff)
    if norm < 1e-14:
        return previous
    return coeff / norm


def _ascend(t: npt.NDArray[np.float64], rng: np.random.Generator) -> tuple[float, list[npt.NDArray[np.float64]]]:
    vs = []
    for _ in range(4):
        v = rng.standard_normal(3)
        vs.append(v / np.linalg.norm(v))
    a1, b1, a2, b2 = vs

    def value() -> float:
        return float(a1 @ t @ (a2 + b2) + b1 @ t @ (a2 - b2))

    current = value()
    for _ in range(ASCENT_MAX_ITER):
        # beta is linear in each vector with the other three fixed
        a1 = _unit_or_keep(t @ (a2 + b2), a1)
        b1 = _unit_or_keep(t @ (a2 - b2), b1)
        a2 = _unit_or_keep(t.T @ (a1 + b1), a2)
        b2 = _unit_or_keep(t.T @ (a1 - b1), b2)
        updated = value()
        if updated - current < ASCENT_TOL:
            current = max(current, updated)
            break
        current = updated
    return current, [a1, b1, a2, b2]


def maximize_beta(
    rho: DensityMatrix,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> tuple[float, BellOperator]:
    """Largest beta over measurement settings by coordinate ascent.

    Restart k draws its starting vectors from derive_rng(seed, k); the best
    restart wins.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    t = correlation_tensor(rho)
    best_value = -math.inf
    best_vectors = None
    for k in range(restarts):
        value, vectors = _ascend(t, derive_rng(seed, k))
        if value > best_value:
            best_value, best_vectors = value, vectors
    operator = build_bell(*(BlochVector.normalized(v) for v in best_vectors))
    return beta(rho, operator), operator


def projector_from_bloch(v: BlochVector) -> ComplexMatrix:
    """(I + v.sigma)/2, the projector onto the +1 outcome of v.sigma."""
    return 0.5 * (SIGMA_0 + v.as_operator())


def ch_translate(rho: DensityMatrix, ch: ChObservables) -> tuple[float, float, float]:
    """CHSH beta of a_j = 2A_j - 1 plus both sides of the CH inequality.

    Returns (chsh_beta, ch_left, ch_right) with
    ch_left = p(A1) + p(A2) and
    ch_right = p(A1A2) + p(A1B2) + p(B1A2) - p(B1B2).
    """
    def p(op1: ComplexMatrix, op2: ComplexMatrix) -> float:
        return float(np.real(np.trace(rho.mat @ kron(op1, op2))))

    ch_left = p(ch.a1, SIGMA_0) + p(SIGMA_0, ch.a2)
    ch_right = p(ch.a1, ch.a2) + p(ch.a1, ch.b2) + p(ch.b1, ch.a2) - p(ch.b1, ch.b2)

    a1, b1, a2, b2 = (2.0 * m - SIGMA_0 for m in (ch.a1, ch.b1, ch.a2, ch.b2))
    mat = kron(a1, a2) + kron(a1, b2) + kron(b1, a2) - kron(b1, b2)
    chsh_beta = float(np.real(np.trace(rho.mat @ mat)))
    return chsh_beta, ch_left, ch_right


# --- JSON -------------------------------------------------------------------

SETTINGS_KEYS = ("a1", "b1", "a2", "b2")


def settings_to_json(b: BellOperator) -> dict:
    return {key: [v.x, v.y, v.z] for key, v in zip(SETTINGS_KEYS, b.settings)}


def settings_from_json(payload: dict) -> BellOperator:
    """Parse {"a1": [x, y, z], "b1": ..., "a2": ..., "b2": ...}."""
    if not isinstance(payload, dict):
        raise MalformedInputError("Settings document must be an object")
    vectors = []
    for key in SETTINGS_KEYS:
        values = payload.get(key)
        if (
            not isinstance(values, list)
            or len(values) != 3
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in values)
        ):
            raise MalformedInputError(f"Settings key '{key}' must be a list of 3 numbers")
        vectors.append(BlochVector.from_sequence(values))
    return build_bell(*vectors)


def load_settings(path: str | Path) -> BellOperator:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"Cannot read settings file {path}: {exc}") from exc
    return settings_from_json(payload)
