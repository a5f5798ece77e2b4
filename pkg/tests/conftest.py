import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def crandn(rng, size, var=1.0):
    return np.sqrt(var / 2) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


# Lines recorded by test_acceptance.py; shown at the end of every run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
