"""Shared fixtures."""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core import resolve_timer_spec, OracleSpec


@pytest.fixture
def unit_timer():
    """tau_prec = 1 ns, tau_acc = 1000 ns, j = 1000."""
    return resolve_timer_spec(1, 1000)


@pytest.fixture
def logistic(unit_timer):
    return OracleSpec.logistic(unit_timer, 0.009, 0.5)
