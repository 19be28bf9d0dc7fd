"""Shared fixtures: isolated data paths and the shipped golden data."""

import pytest

from k3quot.core.classes import load_fixture
from k3quot.engine.rules import VerdictTable
from k3quot.engine.towers import load_plans
from k3quot.settings import (
    ENRIQUES_VERDICTS_ENV,
    FIXTURES_ENV,
    PLANS_ENV,
    VERDICTS_ENV,
    DataPaths,
)

_ENV_VARS = (FIXTURES_ENV, VERDICTS_ENV, ENRIQUES_VERDICTS_ENV, PLANS_ENV)


@pytest.fixture(autouse=True)
def data_env(monkeypatch):
    """Point every data path at the shipped files regardless of the caller's env."""
    for name in _ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def data_paths():
    return DataPaths()


@pytest.fixture(scope="session")
def fixture(data_paths):
    return load_fixture(data_paths.fixtures)


@pytest.fixture(scope="session")
def verdicts(data_paths):
    return VerdictTable.load(data_paths.verdicts)


@pytest.fixture(scope="session")
def enriques_verdicts(data_paths):
    return VerdictTable.load(data_paths.enriques_verdicts)


@pytest.fixture(scope="session")
def plans(data_paths):
    return load_plans(data_paths.plans)
