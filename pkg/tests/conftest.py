import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

ACCEPTANCE_LINES = []


def angle_distance(a, b):
    """Distance between unit-circle points measured along the circle."""
    return np.abs(np.angle(np.asarray(a) * np.conj(np.asarray(b))))


def multiset_angle_error(got, want):
    """Largest angle error under the best one-to-one matching of two multisets."""
    got = np.asarray(got).ravel()
    want = np.asarray(want).ravel()
    if got.size != want.size:
        return np.inf
    cost = angle_distance(got[:, None], want[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def orthonormal_basis(X):
    """Independent orthonormalization through numpy's LAPACK-backed QR."""
    Q, _ = np.linalg.qr(X)
    return Q


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
