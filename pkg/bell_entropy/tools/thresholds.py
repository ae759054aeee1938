"""Entropy thresholds above which a state cannot violate CHSH."""

from bell_entropy.regions import ROUNDED_THRESHOLDS, THRESHOLD_NAMES, threshold


def thresholds() -> dict:
    """
    Compute the five threshold constants.

    Returns:
        Dictionary with each constant at full precision plus the published
        three-digit values under "rounded"
    """
    result = {name: threshold(name) for name in THRESHOLD_NAMES}
    result["rounded"] = dict(ROUNDED_THRESHOLDS)
    return result
