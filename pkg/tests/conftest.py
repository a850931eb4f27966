from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from tanglekit.gen import build_family

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def k1():
    return build_family("K1")


@pytest.fixture
def k2():
    return build_family("K2")
