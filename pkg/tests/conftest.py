import pytest

from colorlie.field import Field


@pytest.fixture(scope="session")
def F5():
    return Field(5)


@pytest.fixture(scope="session")
def F7():
    return Field(7)


@pytest.fixture(scope="session")
def F25():
    return Field(5, 2)
