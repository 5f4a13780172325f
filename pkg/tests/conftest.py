import numpy as np
import pytest

from mbqspat.fixtures import be2, h2, subset32_entry
from mbqspat.io import LibraryEntry


@pytest.fixture(scope="session")
def be2_ham():
    return be2()


@pytest.fixture(scope="session")
def h2_ham():
    return h2()


@pytest.fixture(scope="session")
def subset32():
    return subset32_entry()


@pytest.fixture(scope="session")
def subset32_pattern(subset32):
    return LibraryEntry.from_json(subset32).pattern()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
