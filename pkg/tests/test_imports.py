"""Every module imports cleanly."""

import importlib

import pytest

MODULES = [
    "bell_entropy",
    "bell_entropy.errors",
    "bell_entropy.config",
    "bell_entropy.numkit",
    "bell_entropy.states",
    "bell_entropy.bell",
    "bell_entropy.entropy",
    "bell_entropy.regions",
    "bell_entropy.extremal",
    "bell_entropy.verify",
    "bell_entropy.tools",
    "bell_entropy.cli",
    "bell_entropy.server",
]


@pytest.mark.parametrize("name", MODULES)
def test_import(name):
    importlib.import_module(name)


def test_tools_exported():
    from bell_entropy.tools import analyze_state, boundary_curve_table, gibbs_curve_table, run_verification, thresholds

    assert all(callable(f) for f in (analyze_state, boundary_curve_table, gibbs_curve_table, run_verification, thresholds))
