import pytest

from arith import build_divisor_table
from symbolic import numeric_constants


@pytest.fixture(scope="session")
def small_table():
    return build_divisor_table(10**4)


@pytest.fixture(scope="session")
def table():
    return build_divisor_table(10**6)


@pytest.fixture(scope="session")
def big_table():
    """Only the slow acceptance sweeps ask for this one."""
    return build_divisor_table(10**7)


@pytest.fixture(scope="session")
def constants():
    return numeric_constants(30)
