"""Tools package: plain functions returning JSON-ready dicts."""

from .analysis import analyze_state
from .curves import boundary_curve_table, gibbs_curve_table
from .thresholds import thresholds
from .verification import run_verification

__all__ = ["analyze_state", "boundary_curve_table", "gibbs_curve_table", "thresholds", "run_verification"]
