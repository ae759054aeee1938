"""Single-state analysis: entropies, beta, region verdicts and thresholds cleared."""

from bell_entropy.bell import BellOperator, beta, maximize_beta, settings_from_json, settings_to_json
from bell_entropy.config import DEFAULT_RESTARTS, MEMBERSHIP_TOL
from bell_entropy.entropy import linear_entropy, marginals, von_neumann_entropy
from bell_entropy.regions import RegionId, threshold, verdict
from bell_entropy.states import DensityMatrix, density_from_json


def analyze_state(
    state: dict | DensityMatrix,
    settings: dict | BellOperator | None = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    membership_tol: float = MEMBERSHIP_TOL,
) -> dict:
    """
    Analyze one two-qubit state.

    Args:
        state: {"matrix": 4x4 [re, im] entries} or a validated DensityMatrix
        settings: {"a1", "b1", "a2", "b2": [x, y, z]} or a BellOperator; beta is
            maximized when absent
        restarts: coordinate-ascent restarts for maximization
        seed: master seed for maximization restarts
        membership_tol: slack allowed on region membership

    Returns:
        Dictionary with both entropy reports, beta, region verdicts and the
        thresholds the state clears
    """
    rho = state if isinstance(state, DensityMatrix) else density_from_json(state)
    reduced = marginals(rho)
    linear = linear_entropy(rho, reduced)
    von_neumann = von_neumann_entropy(rho, reduced)

    if settings is None:
        beta_val, operator = maximize_beta(rho, restarts=restarts, seed=seed)
        source = "maximized"
    else:
        operator = settings if isinstance(settings, BellOperator) else settings_from_json(settings)
        beta_val = beta(rho, operator)
        source = "settings"

    points = {
        RegionId.LINEAR_TOTAL: linear.s12,
        RegionId.LINEAR_COND_SUM: linear.cond_sum,
        RegionId.VN_TOTAL: von_neumann.s12,
        RegionId.VN_COND_SUM: von_neumann.cond_sum,
    }
    result = {
        "linear": linear.to_dict(),
        "vonNeumann": von_neumann.to_dict(),
        "s12_linear": linear.s12,
        "beta": beta_val,
        "beta_source": source,
        "settings": settings_to_json(operator),
        "regions": [verdict(region, beta_val, value, membership_tol).to_dict() for region, value in points.items()],
        "thresholds_cleared": {
            "linearEntropy": linear.s12 >= threshold("linearEntropy"),
            "linearCondSum": linear.cond_sum >= threshold("linearCondSum"),
            "vnEntropy": von_neumann.s12 >= threshold("vnEntropy"),
            "vnCondSum": von_neumann.cond_sum >= threshold("vnCondSum"),
        },
    }
    if source == "maximized":
        result["betaMax"] = beta_val
    return result
