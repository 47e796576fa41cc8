import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from superiso import catalog
from superiso.exactlin import QQ, Field

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

GF5 = Field(5)
GF7 = Field(7)
FIELDS = [QQ, GF5, GF7]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def paper_L():
    return catalog.load("paper-L")


@pytest.fixture(scope="session")
def paper_M():
    return catalog.load("paper-M")


@pytest.fixture(scope="session")
def heis01():
    return catalog.load("heisenberg-0-1")


def valid_entries(F=QQ, max_dim=None):
    return catalog.entries_over(F, valid_only=True, max_dim=max_dim)
