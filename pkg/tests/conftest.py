import pytest

from tinregions import PowerBudget, example_channel


@pytest.fixture(scope="session")
def sec6():
    return example_channel()


@pytest.fixture(scope="session")
def budget10():
    return PowerBudget(10.0, 10.0)
