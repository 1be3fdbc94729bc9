"""Shared fixtures and hypothesis profile for the suite.

The profile keeps example counts small enough that the whole suite,
acceptance gate included, stays well inside a two minute budget.
"""

import os

import pytest
from hypothesis import settings, HealthCheck

from sheafkit.field import Field

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session")
def corpus_dir():
    return os.path.join(REPO_ROOT, "corpus")


@pytest.fixture(scope="session")
def f2():
    return Field.parse("F2")


@pytest.fixture(scope="session")
def f5():
    return Field.parse("Fp:5")


@pytest.fixture(scope="session")
def qq():
    return Field.parse("Q")


@pytest.fixture(scope="session", params=["F2", "Fp:5", "Q"])
def any_field(request):
    return Field.parse(request.param)
