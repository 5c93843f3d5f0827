"""
Pytest configuration and shared fixtures for Bifurcato tests.
Provides the published parameter sets, a seeded generator and config resets.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from core.config import clear_config_caches
from models.params import DimensionalParams, DimensionlessParams
from utils.numerics import make_rng


# ============================================================================
# Published parameter sets
# ============================================================================

@pytest.fixture
def fig5a_params() -> DimensionlessParams:
    """Repelling saddle-node at (0.686141, 1.60704)."""
    return DimensionlessParams(a=-1.5, b=1.0, c=0.3, m=0.5, n=0.42696)


@pytest.fixture
def fig7a_params() -> DimensionlessParams:
    """Codimension-2 cusp at (0.319493, 1.848663)."""
    return DimensionlessParams(a=-1.5, b=1.8045924, c=0.330275, m=0.05, n=0.172824)


@pytest.fixture
def fig7b_params() -> DimensionlessParams:
    """Codimension-3 cusp at (0.338614, 1.959299)."""
    return DimensionlessParams(a=-1.8, b=1.0, c=0.330275, m=0.06438, n=0.172824)


@pytest.fixture
def fig8_params() -> DimensionlessParams:
    return DimensionlessParams(a=-0.3, b=0.5, c=0.1253449, m=0.4, n=0.3173105)


@pytest.fixture
def ex51_params() -> DimensionlessParams:
    """Weak focus of order 2 at E2 = (0.400544, 8.01088)."""
    return DimensionlessParams(a=-0.35, b=1.0, c=0.0988432, m=0.0292698, n=0.05)


@pytest.fixture
def ex52_params() -> DimensionlessParams:
    """Weak focus of order 3 at E2 = (1.08727, 28.0903)."""
    return DimensionlessParams(a=2.5, b=0.02, c=0.0300281, m=0.0391069, n=0.0387063)


@pytest.fixture
def ex51_two_cycle_params() -> DimensionlessParams:
    """Example 5.1 with B1, B3 steered so small cycles sit at amplitudes 0.02 and 0.05."""
    return DimensionlessParams(a=-0.3598781618573929, b=1.0, c=0.0988432, m=0.0292698, n=0.05001924288033892)


@pytest.fixture
def ex52_three_cycle_params() -> DimensionlessParams:
    """Example 5.2 with B1, B3, B5 steered for amplitudes 0.1, 0.2 and 0.3."""
    return DimensionlessParams(
        a=2.4814804613450034, b=0.02, c=0.0300281, m=0.03770234066910479, n=0.03769349729307076
    )


@pytest.fixture
def origin_params() -> DimensionlessParams:
    """Globally stable disease-free state (no positive equilibria)."""
    return DimensionlessParams(a=-1.5, b=1.0, c=0.3, m=1.4, n=0.6)


@pytest.fixture
def dimensional_params() -> DimensionalParams:
    return DimensionalParams(Lambda=1.0, d=0.1, mu=0.2, delta=0.05, kappa=0.3, beta=-0.4, gamma=1.0)


@pytest.fixture
def rng():
    return make_rng(20240101)


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Each test starts from default settings."""
    monkeypatch.setenv("BIFURCATO_THREADS", "1")
    clear_config_caches()
    yield
    clear_config_caches()


# ============================================================================
# Pytest Configuration
# ============================================================================

def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers", "integration: mark test as integration test"
    )
    config.addinivalue_line(
        "markers", "unit: mark test as unit test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow"
    )
