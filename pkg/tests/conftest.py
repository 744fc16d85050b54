import pytest

from stokes_certify.recurrence import CoefficientTable

N_FULL = 2000


@pytest.fixture(scope="session")
def table_1000():
    return CoefficientTable(1000)


@pytest.fixture(scope="session")
def table_full(table_1000):
    # the 2000-term table extends the 1000-term one; prefix entries never change
    return table_1000.extend(N_FULL)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
