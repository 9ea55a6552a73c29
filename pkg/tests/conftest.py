"""Shared fixtures: tolerance, the 3×3 counterexample operands and small maps."""

import numpy as np
import pytest

from src.config import get_settings
from src.maps import Compression, NormalizedTrace
from src.schemas import ToleranceConfig

ENV_VARS = (
    "VERIFIER_ATOL",
    "VERIFIER_RTOL",
    "VERIFIER_EIG_SOLVER",
    "VERIFIER_WORKERS",
    "VERIFIER_SEED",
    "VERIFIER_SUITE_CONFIG",
)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def tol():
    return ToleranceConfig(atol=1e-10, rtol=1e-9)


@pytest.fixture
def fixed_A():
    return np.array([[2.0, 0.0, 0.0], [0.0, 2.0, 1.0], [0.0, 1.0, 3.0]])


@pytest.fixture
def fixed_B():
    return np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 0.0], [1.0, 0.0, 1.0]])


@pytest.fixture
def compression():
    return Compression(3, 2)


@pytest.fixture
def trace_map():
    """Φ(X) = (tr X / 2)·I₂ on M₂."""
    return NormalizedTrace(2, 2)


@pytest.fixture
def omega_A():
    return np.array([[2.0, 1.0], [1.0, 4.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
