import pytest

from splitjac import pipeline


@pytest.fixture(scope="session")
def golden():
    return pipeline.load_golden()


@pytest.fixture(scope="session")
def screen_pairs():
    return pipeline.run_screen()


@pytest.fixture(scope="session")
def classification():
    rows, report = pipeline.run_search()
    return rows, report
