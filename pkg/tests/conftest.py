import pytest

import corpus


@pytest.fixture(scope="session")
def richelson():
    return corpus.load("richelson").election


@pytest.fixture(scope="session")
def e4():
    return corpus.load("e4").election


@pytest.fixture(scope="session")
def unanimous():
    return corpus.load("unanimous").election


@pytest.fixture(scope="session")
def example4():
    return corpus.load("example4").election


@pytest.fixture(scope="session")
def table_corpus():
    return corpus.table_corpus()


@pytest.fixture(scope="session")
def utility_corpus():
    return corpus.utility_corpus()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
