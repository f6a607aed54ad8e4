import pytest
from hypothesis import HealthCheck, settings

from poscurves.fans import BUILTIN_FANS, builtin

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FAN_NAMES = sorted(BUILTIN_FANS)


@pytest.fixture(params=FAN_NAMES)
def variety(request):
    return builtin(request.param)


@pytest.fixture
def p2():
    return builtin("P2")


@pytest.fixture
def blp2():
    return builtin("BlP2")


@pytest.fixture
def p1p1():
    return builtin("P1xP1")


@pytest.fixture
def bundle():
    return builtin("PBundle")
