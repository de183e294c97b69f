import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fracdisk.bernstein import BernsteinSpec

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def stable_05():
    return BernsteinSpec.stable(0.5)


@pytest.fixture
def stable_07():
    return BernsteinSpec.stable(0.7)


@pytest.fixture
def tempered_06():
    return BernsteinSpec.tempered(0.6, 1.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
