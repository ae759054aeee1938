"""Shared fixtures; puts the repository root on sys.path."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from bell_entropy.bell import build_bell, canonical_settings  # noqa: E402
from bell_entropy.states import maximally_mixed, singlet  # noqa: E402


@pytest.fixture
def canonical():
    return build_bell(*canonical_settings())


@pytest.fixture
def mixed():
    return maximally_mixed()


@pytest.fixture
def psi_minus():
    return singlet()
