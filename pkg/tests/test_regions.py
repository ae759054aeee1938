import math

import numpy as np
import pytest

from bell_entropy.bell import TSIRELSON, random_bell
from bell_entropy.errors import DomainError
from bell_entropy.regions import (
    RegionId,
    beta_grid,
    boundary_curve,
    classify,
    lower_bound,
    threshold,
    upper_bound,
)
from bell_entropy.states import derive_rng, sample_density

LN2 = math.log(2)


def test_linear_total_branches_meet_at_two():
    assert upper_bound(RegionId.LINEAR_TOTAL, 2.0) == 0.5
    assert upper_bound(RegionId.LINEAR_TOTAL, -2.0) == 0.5
    assert upper_bound(RegionId.LINEAR_COND_SUM, 2.0) == 0.0


def test_linear_branch_switch():
    # below |beta| = 2 the first parabola is active, above it the second
    assert upper_bound(RegionId.LINEAR_TOTAL, 1.0) == pytest.approx(0.75 - 1 / 16)
    assert upper_bound(RegionId.LINEAR_TOTAL, 2.5) == pytest.approx(1 - 6.25 / 8)
    assert upper_bound(RegionId.LINEAR_COND_SUM, 1.0) == pytest.approx(0.5 - 1 / 8)
    assert upper_bound(RegionId.LINEAR_COND_SUM, 2.5) == pytest.approx(1 - 6.25 / 4)


def test_von_neumann_bound_values():
    assert upper_bound(RegionId.VN_TOTAL, 0.0) == pytest.approx(2 * LN2)
    assert upper_bound(RegionId.VN_TOTAL, TSIRELSON) == pytest.approx(0.0, abs=1e-15)
    expected = 3 * LN2 - math.sqrt(2) * math.log(math.sqrt(2) + 1)
    assert upper_bound(RegionId.VN_TOTAL, 2.0) == pytest.approx(expected, abs=1e-14)
    assert upper_bound(RegionId.VN_TOTAL, 2.0) == pytest.approx(0.83299, abs=1e-5)


def test_vn_cond_sum_bound_follows_total():
    for b in np.linspace(-TSIRELSON, TSIRELSON, 41):
        total = upper_bound(RegionId.VN_TOTAL, b)
        assert upper_bound(RegionId.VN_COND_SUM, b) == pytest.approx(2 * total - 2 * LN2, abs=1e-14)


def test_lower_bounds():
    assert lower_bound(RegionId.LINEAR_TOTAL) == 0.0
    assert lower_bound(RegionId.LINEAR_COND_SUM) == -1.0
    assert lower_bound(RegionId.VN_TOTAL) == 0.0
    assert lower_bound(RegionId.VN_COND_SUM) == pytest.approx(-1.386294, abs=1e-6)


@pytest.mark.parametrize("region", list(RegionId))
def test_bounds_decrease_in_abs_beta(region):
    values = [upper_bound(region, b) for b in np.linspace(0.01, TSIRELSON, 200)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_beta_outside_tsirelson_is_rejected():
    with pytest.raises(DomainError):
        upper_bound(RegionId.VN_TOTAL, 3.0)


def test_classify_maximally_mixed(mixed):
    verdicts = classify(mixed, random_bell(2))
    assert len(verdicts) == 4
    for v in verdicts:
        assert v.inside
        assert v.beta_val == pytest.approx(0.0, abs=1e-12)
        assert v.margin > 0


def test_classify_singlet_sits_on_linear_boundary(psi_minus, canonical):
    verdicts = {v.region: v for v in classify(psi_minus, canonical)}
    linear = verdicts[RegionId.LINEAR_TOTAL]
    assert linear.inside
    assert linear.entropy_val == pytest.approx(0.0, abs=1e-12)
    assert linear.upper_bound == pytest.approx(0.0, abs=1e-12)
    assert linear.margin == pytest.approx(0.0, abs=1e-9)


def test_classify_random_pairs_stay_inside():
    for k in range(200):
        rng = derive_rng(1, k)
        rho = sample_density(rng, int(rng.integers(1, 5)))
        assert all(v.inside for v in classify(rho, random_bell(rng)))


def test_verdict_dict_keys(mixed, canonical):
    record = classify(mixed, canonical)[0].to_dict()
    assert record["region"] == "linear-total"
    assert set(record) == {"region", "beta", "entropy", "upperBound", "lowerBound", "inside", "margin"}


def test_thresholds():
    assert threshold("linearEntropy") == 0.5
    assert threshold("linearEntropy") == upper_bound(RegionId.LINEAR_TOTAL, 2.0)
    assert threshold("linearCondSum") == 0.0
    assert abs(threshold("vnEntropy") - 0.833) <= 5e-4
    assert threshold("vnEntropy") == pytest.approx(upper_bound(RegionId.VN_TOTAL, 2.0), abs=1e-14)
    assert abs(threshold("vnCondSum") - 0.280) <= 5e-4
    assert threshold("vnCondSum") == pytest.approx(0.27969, abs=1e-5)


def test_vn_cond_zero_beta():
    root = threshold("vnCondZeroBeta")
    assert abs(root - 2.206) <= 1e-3
    assert upper_bound(RegionId.VN_COND_SUM, root) == pytest.approx(0.0, abs=1e-9)


def test_unknown_threshold():
    with pytest.raises(ValueError):
        threshold("concurrence")


def test_boundary_curve_linear_total():
    curve = boundary_curve(RegionId.LINEAR_TOTAL, 3)
    assert curve == [(-TSIRELSON, 0.0), (0.0, 0.75), (TSIRELSON, 0.0)]


def test_boundary_curve_vn_total():
    curve = boundary_curve(RegionId.VN_TOTAL, 3)
    assert [b for b, _ in curve] == [-TSIRELSON, 0.0, TSIRELSON]
    assert [v for _, v in curve] == pytest.approx([0.0, 2 * LN2, 0.0], abs=1e-15)


@pytest.mark.parametrize("region", list(RegionId))
def test_boundary_curve_is_symmetric(region):
    curve = boundary_curve(region, 64)
    for (b_lo, v_lo), (b_hi, v_hi) in zip(curve, reversed(curve)):
        assert b_lo == -b_hi
        assert v_lo == v_hi


def test_beta_grid_needs_two_points():
    assert list(beta_grid(2)) == [-TSIRELSON, TSIRELSON]
    with pytest.raises(DomainError):
        beta_grid(1)
