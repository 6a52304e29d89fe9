import pytest

from tausurvey.delta import delta_coefficients


@pytest.fixture(scope="session")
def table10k():
    return delta_coefficients(10_000)


@pytest.fixture(scope="session")
def table500():
    return delta_coefficients(500)
