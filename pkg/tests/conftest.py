"""Test fixtures for boolearn."""

from typing import Generator

import pytest
from fastapi.testclient import TestClient

from boolearn.core.config import get_settings
from boolearn.main import app
from boolearn.models.pla import Dataset
from tests.helpers import exhaustive_dataset


@pytest.fixture(autouse=True)
def fresh_settings() -> Generator[None, None, None]:
    """Drop cached settings so environment changes made by a test are picked up."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="function")
def client() -> Generator[TestClient, None, None]:
    """Create a test client for the API."""
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def xor_data() -> Dataset:
    """Create the complete care set of a two-input XOR."""
    return exhaustive_dataset(2, lambda row: row[0] ^ row[1])


@pytest.fixture
def and2_data() -> Dataset:
    """Create the complete care set of a two-input AND."""
    return exhaustive_dataset(2, lambda row: row.all())


@pytest.fixture
def parity6_data() -> Dataset:
    """Create the complete care set of six-input parity."""
    return exhaustive_dataset(6, lambda row: row.sum() % 2 == 1)


@pytest.fixture
def small_pla_text() -> str:
    """Create a small PLA with two minterms per label."""
    return ".i 3\n.o 1\n.p 4\n000 0\n011 0\n101 1\n111 1\n.e\n"
