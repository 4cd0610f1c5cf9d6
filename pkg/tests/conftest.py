import numpy as np
import pytest

from photonbasis import gauss_laguerre_rule


@pytest.fixture(scope="session")
def rule():
    return gauss_laguerre_rule(200, 1.0)


@pytest.fixture(scope="session")
def small_rule():
    return gauss_laguerre_rule(16, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record and print a PASS/FAIL line for one acceptance criterion."""

    def report(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        _CRITERIA[number] = line
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
