import hypothesis
import pytest
from hypothesis import HealthCheck, settings

import reinsgame as rg

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def mix99():
    return rg.MeanCVaRMix(0.99)


@pytest.fixture(scope="session")
def exp1():
    return rg.Exponential(1.0)


@pytest.fixture(scope="session")
def ex2(mix99, exp1):
    """Affine headline game: rho(X; gamma) = 1 + gamma * ln(100)."""
    return rg.GameSpec(family=mix99, dist=exp1, gamma1=2.0 / 3.0, gamma2=1.0 / 3.0, delta=0.8)
