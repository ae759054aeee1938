import math

import numpy as np
import pytest

from bell_entropy.bell import random_bell
from bell_entropy.entropy import (
    entropy_inequality_check,
    entropy_report,
    linear_entropy,
    marginals,
    nats_to_bits,
    shannon_nats,
    von_neumann_entropy,
)
from bell_entropy.extremal import gibbs_state, lambda1_state
from bell_entropy.numkit import hermitian_eigen
from bell_entropy.states import derive_rng, pure_state, sample_density, sample_separable, validate_density

LN2 = math.log(2)


def test_linear_entropy_of_pure_state():
    assert linear_entropy(pure_state([1, 2j, 0, 1])).s12 == pytest.approx(0.0, abs=1e-12)


def test_linear_entropy_of_maximally_mixed(mixed):
    report = linear_entropy(mixed)
    assert report.s12 == pytest.approx(0.75)
    assert report.s1 == pytest.approx(0.5)
    assert report.s2 == pytest.approx(0.5)
    assert report.cond_sum == pytest.approx(0.5)


def test_conditional_fields_are_consistent():
    report = von_neumann_entropy(sample_density(3))
    assert report.cond21 == report.s12 - report.s1
    assert report.cond12 == report.s12 - report.s2
    assert report.cond_sum == report.cond21 + report.cond12


@pytest.mark.parametrize("alpha", [-0.8, -0.2, 0.4, 1.0])
def test_linear_entropy_of_lambda1_family(canonical, alpha):
    assert linear_entropy(lambda1_state(alpha, canonical)).s12 == pytest.approx(0.75 - alpha ** 2 / 4, abs=1e-10)


def test_von_neumann_of_maximally_mixed(mixed):
    report = von_neumann_entropy(mixed)
    assert report.s12 == pytest.approx(2 * LN2, abs=1e-12)
    assert report.s1 == pytest.approx(LN2, abs=1e-12)


def test_von_neumann_of_pure_state(psi_minus):
    assert von_neumann_entropy(psi_minus).s12 == pytest.approx(0.0, abs=1e-12)


def test_von_neumann_of_gibbs_state(canonical):
    rho, _ = gibbs_state(1 / math.sqrt(2), canonical)
    expected = 2 * LN2 + 2 * math.log(math.cosh(1)) - 2 * math.tanh(1)
    assert von_neumann_entropy(rho).s12 == pytest.approx(expected, abs=1e-10)


def test_inequality_check_on_maximally_mixed(mixed):
    assert entropy_inequality_check(linear_entropy(mixed)) == (True, True)


def test_inequality_check_on_singlet(psi_minus):
    assert entropy_inequality_check(linear_entropy(psi_minus)) == (False, False)


def test_inequality_holds_for_separable_states():
    for k in range(100):
        _, rho = sample_separable(derive_rng(8, k))
        assert entropy_inequality_check(linear_entropy(rho)) == (True, True)


def test_unitary_invariance():
    rng = np.random.default_rng(17)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u = hermitian_eigen(0.5 * (g + g.conj().T)).vectors
    rho = sample_density(4)
    rotated = validate_density(u @ rho.mat @ u.conj().T)
    assert von_neumann_entropy(rotated).s12 == pytest.approx(von_neumann_entropy(rho).s12, abs=1e-10)
    assert linear_entropy(rotated).s12 == pytest.approx(linear_entropy(rho).s12, abs=1e-10)


def test_linear_entropy_agrees_with_spectrum():
    for k in range(20):
        rho = sample_density(derive_rng(2, k))
        assert linear_entropy(rho).s12 == pytest.approx(1 - np.sum(rho.spectrum ** 2), abs=1e-11)


def test_bell_diagonal_states_have_maximal_marginals():
    b = random_bell(6)
    rho, _ = gibbs_state(0.8, b)
    assert linear_entropy(rho).s1 == pytest.approx(0.5, abs=1e-10)
    assert von_neumann_entropy(rho).s2 == pytest.approx(LN2, abs=1e-10)


def test_conditional_sums_respect_lower_bounds():
    for k in range(100):
        rho = sample_density(derive_rng(10, k), rank=1 + k % 4)
        assert linear_entropy(rho).cond_sum >= -1 - 1e-12
        assert von_neumann_entropy(rho).cond_sum >= -2 * LN2 - 1e-12


def test_report_dispatch_and_dict(mixed):
    report = entropy_report(mixed, "vonNeumann")
    assert report.kind == "vonNeumann"
    assert set(report.to_dict()) == {"kind", "s12", "s1", "s2", "cond21", "cond12", "condSum"}
    with pytest.raises(ValueError):
        entropy_report(mixed, "renyi")


def test_shannon_ignores_clamped_values():
    assert shannon_nats([0.5, 0.5, 1e-13]) == pytest.approx(LN2)


def test_nats_to_bits():
    assert nats_to_bits(2 * LN2) == pytest.approx(2.0)


def test_shared_marginals_give_identical_reports():
    rho = sample_density(derive_rng(4, 0), 3)
    reduced = marginals(rho)
    assert linear_entropy(rho, reduced) == linear_entropy(rho)
    assert von_neumann_entropy(rho, reduced) == von_neumann_entropy(rho)


def test_shannon_of_pure_spectrum_is_positive_zero():
    value = shannon_nats([0.0, 0.0, 0.0, 1.0])
    assert value == 0.0
    assert math.copysign(1.0, value) == 1.0
    assert shannon_nats(np.full(4, 0.25)) == pytest.approx(2 * LN2, abs=1e-15)
