import warnings

import pytest

from entlink.config import RunConfig
from entlink.loading import MemoryCavityParams
from entlink.source import OpaParams

with warnings.catch_warnings():
    warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
    from fastapi.testclient import TestClient

from entlink.service import create_app


@pytest.fixture(scope="session")
def reference_config() -> RunConfig:
    """Default configuration: G^2 = 0.01, Gamma_c/Gamma = 0.5, unit coupling
    ratios, 5 dB excess per arm, 0.2 dB/km, 500 kHz trial rate."""
    return RunConfig()


@pytest.fixture(scope="session")
def reference_opa() -> OpaParams:
    """Rate-normalized reference source (scale invariance makes Gamma = 1 fine)."""
    return OpaParams(g=0.1, gamma_total=1.0, gamma_out=1.0)


@pytest.fixture(scope="session")
def reference_memory() -> MemoryCavityParams:
    return MemoryCavityParams(gamma_c_total=0.5, gamma_c_in=0.5)


@pytest.fixture(scope="session")
def client() -> TestClient:
    return TestClient(create_app())
