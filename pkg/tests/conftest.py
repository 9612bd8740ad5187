import pytest
from hypothesis import HealthCheck, settings

from ejasym.precision import PrecisionCtx

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionCtx(30)


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionCtx(50)
