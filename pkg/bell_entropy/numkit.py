"""Dense complex linear algebra for 2x2 and 4x4 matrices.

Eigenvalues come from a cyclic complex Jacobi sweep; everything else is plain
numpy. Ordering convention for tensor products is subsystem 1 (x) subsystem 2,
so basis index = 2*i1 + i2.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from bell_entropy.config import HERMITIAN_TOL, MAX_SWEEPS, OFFDIAG_TOL
from bell_entropy.errors import (
    ConvergenceError,
    DimensionError,
    MatrixFunctionError,
    NotHermitianError,
)

ComplexMatrix = npt.NDArray[np.complex128]

ALLOWED_DIMS = (2, 4)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues and the matching orthonormal columns."""
    values: npt.NDArray[np.float64]
    vectors: ComplexMatrix
    sweeps: int = 0


def as_matrix(m, dims: tuple[int, ...] = ALLOWED_DIMS) -> ComplexMatrix:
    """Coerce to a complex square matrix of an allowed dimension."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DimensionError(f"Expected a square matrix of dimension {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("Matrix contains NaN or Inf entries")
    return a


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(m).T


def frobenius(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m, "fro"))


def is_hermitian(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    return frobenius(m - dagger(m)) <= tol


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product of two single-qubit operators."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


def _off_diagonal_norm(a: list[list[complex]]) -> float:
    n = len(a)
    return math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))


def _rotate(a: list[list[complex]], v: list[list[complex]], p: int, q: int) -> None:
    """Zero a[p][q] in place with one unitary Jacobi rotation.

    The rotation is G = [[c, s], [-s conj(w), c conj(w)]] on columns p, q with
    w = a[p][q] / |a[p][q]|; the phase makes the pivot block real.
    """
    apq = a[p][q]
    mag = abs(apq)
    if mag == 0.0:
        return
    w = apq / mag
    theta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    sw_bar, cw_bar = s * w.conjugate(), c * w.conjugate()
    sw, cw = s * w, c * w
    for row in a:
        x, y = row[p], row[q]
        row[p] = c * x - sw_bar * y
        row[q] = s * x + cw_bar * y
    rp, rq = a[p], a[q]
    for k in range(len(rp)):
        x, y = rp[k], rq[k]
        rp[k] = c * x - sw * y
        rq[k] = s * x + cw * y
    rp[q] = 0j
    rq[p] = 0j
    for row in v:
        x, y = row[p], row[q]
        row[p] = c * x - sw_bar * y
        row[q] = s * x + cw_bar * y


def hermitian_eigen(
    h: ComplexMatrix,
    tol: float = OFFDIAG_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Args:
        h: Hermitian 2x2 or 4x4 matrix
        tol: convergence threshold on the off-diagonal Frobenius norm
        max_sweeps: hard cap on full sweeps

    Returns:
        EigenDecomposition with ascending values

    Raises:
        NotHermitianError: if ||h - h^dagger||_F exceeds HERMITIAN_TOL
        ConvergenceError: if the sweep budget runs out
    """
    a = as_matrix(h)
    if not is_hermitian(a):
        raise NotHermitianError(f"Matrix is not Hermitian (||H - H^dagger|| = {frobenius(a - dagger(a)):.3e})")
    n = a.shape[0]
    # rotations act on nested lists of Python complex scalars
    work = (0.5 * (a + dagger(a))).tolist()
    basis = np.eye(n, dtype=np.complex128).tolist()

    sweeps = 0
    while _off_diagonal_norm(work) >= tol:
        if sweeps == max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(work, basis, p, q)
        sweeps += 1

    values = np.array([work[i][i].real for i in range(n)])
    order = np.argsort(values, kind="stable")
    vectors = np.array(basis, dtype=np.complex128)
    return EigenDecomposition(values=values[order], vectors=vectors[:, order], sweeps=sweeps)


def matrix_function(h: ComplexMatrix, f: Callable[[float], float]) -> ComplexMatrix:
    """Apply a real scalar function to a Hermitian matrix through its spectrum."""
    eig = hermitian_eigen(h)
    try:
        fv = np.array([f(float(x)) for x in eig.values], dtype=np.float64)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise MatrixFunctionError(f"Function undefined on spectrum {eig.values}: {exc}") from exc
    if not np.all(np.isfinite(fv)):
        raise MatrixFunctionError(f"Function undefined on spectrum {eig.values}")
    return (eig.vectors * fv) @ dagger(eig.vectors)


def matrix_exp(h: ComplexMatrix) -> ComplexMatrix:
    return matrix_function(h, math.exp)


def matrix_log(h: ComplexMatrix) -> ComplexMatrix:
    """Natural log of a positive definite matrix."""

    def _log(x: float) -> float:
        if x <= 0.0:
            raise ValueError(f"log of non-positive eigenvalue {x:.3e}")
        return math.log(x)

    return matrix_function(h, _log)
