import pytest

from .graphs import complete, cycle

ACCEPTANCE_LINES = []


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c6():
    return cycle(6)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
