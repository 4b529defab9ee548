"""Shared fixtures: prime tables are expensive, build each size once."""

import pytest

from rmf_lab.primes import build_prime_table

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Recorder for the one-line-per-criterion acceptance summary."""

    def record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


@pytest.fixture(scope="session")
def table1k():
    return build_prime_table(1000)


@pytest.fixture(scope="session")
def table1e4():
    return build_prime_table(10**4)


@pytest.fixture(scope="session")
def table1e5():
    return build_prime_table(10**5)


@pytest.fixture(scope="session")
def table1e6():
    return build_prime_table(10**6)


@pytest.fixture(scope="session")
def table1e7():
    return build_prime_table(10**7)


@pytest.fixture(scope="session")
def table1e8():
    return build_prime_table(10**8)


@pytest.fixture(scope="session")
def rough_report_1e8(table1e8):
    # ~1 min of quadrature; shared by the invariant suite and acceptance
    from rmf_lab.verify import rough_integral_three_ways

    return rough_integral_three_ways(table1e8, 10**8, 100.0)
