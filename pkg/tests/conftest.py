import numpy as np
import pytest

from _acceptance_log import LINES

from steerkit import qstate


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def sz():
    return qstate.pauli_basis("z")


@pytest.fixture
def sx():
    return qstate.pauli_basis("x")


@pytest.fixture
def anticorrelated():
    """Even mixture of |up,down> and |down,up>."""
    return qstate.validate_density(np.diag([0, 0.5, 0.5, 0]), [2, 2])


@pytest.fixture
def singlet():
    return qstate.pure_state([0, 1, -1, 0], [2, 2])


@pytest.fixture
def upup():
    return qstate.pure_state([1, 0, 0, 0], [2, 2])


@pytest.fixture
def rng():
    return np.random.default_rng(20131)
