import math

import numpy as np
import pytest
import scipy.linalg

from bell_entropy.bell import SIGMA_X, SIGMA_Z, random_bell
from bell_entropy.errors import DimensionError, MatrixFunctionError, NotHermitianError
from bell_entropy.numkit import hermitian_eigen, kron, matrix_exp, matrix_function, matrix_log


def random_hermitian(rng, n=4):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def test_kron_identity():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_zz_is_diagonal():
    assert np.allclose(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_x_identity_is_block_antidiagonal():
    expected = np.zeros((4, 4))
    expected[0:2, 2:4] = np.eye(2)
    expected[2:4, 0:2] = np.eye(2)
    assert np.allclose(kron(SIGMA_X, np.eye(2)), expected)


def test_kron_rejects_wrong_dimension():
    with pytest.raises(DimensionError):
        kron(np.eye(4), np.eye(2))


def test_kron_trace_factorizes():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert abs(np.trace(kron(a, b)) - np.trace(a) * np.trace(b)) <= 1e-12


def test_eigen_of_diagonal_matrix():
    eig = hermitian_eigen(np.diag([0.4, 0.1, 0.3, 0.2]))
    assert np.allclose(eig.values, [0.1, 0.2, 0.3, 0.4])
    assert np.allclose(np.abs(eig.vectors), np.eye(4)[:, [1, 3, 2, 0]])


def test_eigen_of_maximal_bell_operator(canonical):
    eig = hermitian_eigen(canonical.mat)
    assert eig.values == pytest.approx([-2 * math.sqrt(2), 0.0, 0.0, 2 * math.sqrt(2)], abs=1e-10)


def test_eigen_reconstruction_on_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(200):
        h = random_hermitian(rng, n=int(rng.choice([2, 4])))
        eig = hermitian_eigen(h)
        v = eig.vectors
        assert np.linalg.norm(v @ np.diag(eig.values) @ v.conj().T - h) <= 1e-11
        assert np.linalg.norm(v.conj().T @ v - np.eye(len(h))) <= 1e-11
        assert np.all(np.diff(eig.values) >= 0)
        assert eig.values.sum() == pytest.approx(np.trace(h).real, abs=1e-11)
        assert (eig.values ** 2).sum() == pytest.approx(np.trace(h @ h).real, abs=1e-10)
        assert eig.values == pytest.approx(scipy.linalg.eigvalsh(h), abs=1e-10)


def test_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_eigen_rejects_bad_shape_and_nan():
    with pytest.raises(DimensionError):
        hermitian_eigen(np.eye(3))
    with pytest.raises(DimensionError):
        hermitian_eigen(np.diag([1.0, np.nan]))


def test_matrix_exp_of_zero_is_identity():
    assert np.allclose(matrix_exp(np.zeros((4, 4))), np.eye(4))


def test_matrix_exp_of_diagonal():
    e = math.e
    assert np.allclose(matrix_exp(np.diag([1.0, -1.0, -1.0, 1.0])), np.diag([e, 1 / e, 1 / e, e]))


def test_partition_function_matches_cosh_product():
    b = random_bell(7)
    lam = 0.3
    xi1, xi2 = b.xi
    mu, nu = (xi1 + xi2) / 2, (xi1 - xi2) / 2
    z = np.trace(matrix_exp(lam * b.mat)).real
    assert z == pytest.approx(4 * math.cosh(lam * mu) * math.cosh(lam * nu), rel=1e-10)


def test_identity_function_reproduces_matrix():
    h = random_hermitian(np.random.default_rng(5))
    assert np.linalg.norm(matrix_function(h, lambda x: x) - h) <= 1e-11


def test_matrix_log_inverts_exp():
    h = random_hermitian(np.random.default_rng(8))
    assert np.linalg.norm(matrix_log(matrix_exp(h)) - h) <= 1e-9


def test_matrix_log_rejects_non_positive():
    with pytest.raises(MatrixFunctionError):
        matrix_log(np.diag([1.0, 0.0, 0.5, 0.5]))


def test_eigen_converges_in_few_sweeps_and_keeps_input():
    rng = np.random.default_rng(5)
    for _ in range(50):
        h = random_hermitian(rng)
        before = h.copy()
        eig = hermitian_eigen(h)
        assert 1 <= eig.sweeps <= 10
        assert np.array_equal(h, before)
        assert isinstance(eig.vectors, np.ndarray) and eig.vectors.dtype == np.complex128


def test_eigen_of_complex_phase_coupling():
    h = np.array([[1.0, 0.5j], [-0.5j, 1.0]])
    eig = hermitian_eigen(h)
    assert eig.values == pytest.approx([0.5, 1.5], abs=1e-14)
    v = eig.vectors[:, 1]
    assert np.linalg.norm(h @ v - 1.5 * v) <= 1e-14
