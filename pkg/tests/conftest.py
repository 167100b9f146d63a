import pytest
from hypothesis import settings, HealthCheck

settings.register_profile(
    "exact",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def sf4():
    from kmatlab.scalars import ScalarField
    return ScalarField(4)


@pytest.fixture(scope="session")
def sf6():
    from kmatlab.scalars import ScalarField
    return ScalarField(6)
