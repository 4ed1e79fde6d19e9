"""
Shared fixtures for the alabama tests.
"""

import numpy
import pytest

import alabama


@pytest.fixture(autouse=True)
def reset_db():
    """
    Restore database settings changed by a test.
    """

    saved = {name: alabama.db.get(name) for name in alabama.db.par_table.values()}
    saved["parameters"] = alabama.db.parameters

    yield alabama.db

    for name, value in saved.items():
        alabama.db.set(name, value)


@pytest.fixture
def rng():
    return numpy.random.default_rng(20240601)


@pytest.fixture
def random_shares(rng):
    """
    Returns a function drawing uniform share vectors on the simplex.
    """

    def draw(m: int) -> numpy.ndarray:
        t = rng.standard_exponential(m)
        return t / t.sum()

    return draw
