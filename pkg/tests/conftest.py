import numpy as np
import pytest

from iontrap_ut.fockspace import Truncation
from iontrap_ut.model import SystemParams


@pytest.fixture
def standard():
    """eta=0.2, nu=1, omega=0.5 at N=40."""
    return SystemParams(0.2, 1.0, 0.5), Truncation(40)


def maxabs(A, keep=None):
    A = np.asarray(A)
    if keep is not None:
        A = A[np.ix_(keep, keep)]
    return float(np.max(np.abs(A)))


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; shown in the terminal summary."""

    def _report(criterion, passed, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
