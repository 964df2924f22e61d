from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# Four points in the 3-dimensional torus; FW value 12.
GOLDEN = np.array([[0, 0, 5], [0, 1, 2], [0, 3, 0], [0, 3, 6]], dtype=float)
GOLDEN_KLEENE = np.array([[0, 3, 5], [-1, 0, 3], [-2, -1, 0]], dtype=float)
GOLDEN_MIN_VERTICES = [(0, 3, 5), (0, 1, 4), (0, 1, 2)]
GOLDEN_MAX_VERTICES = [(0, 1, 2), (0, 3, 4), (0, 2, 5)]
GOLDEN_POLYGON = {(1, 2), (3, 4), (3, 5), (2, 5), (1, 4)}

# Acceptance results, printed in the terminal summary.
ACCEPTANCE = {}


def random_instance(rng, n_range=(2, 8), d_range=(2, 4), high=20):
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    d = int(rng.integers(d_range[0], d_range[1] + 1))
    return rng.integers(0, high + 1, size=(n, d)).astype(float)


def same_point_set(A, B, eps=1e-9):
    A = [np.asarray(a, dtype=float) for a in A]
    B = [np.asarray(b, dtype=float) for b in B]
    covered = all(any(np.all(np.abs(a - b) <= eps) for b in B) for a in A)
    return covered and all(any(np.all(np.abs(a - b) <= eps) for a in A) for b in B)


@pytest.fixture
def golden():
    return GOLDEN.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
