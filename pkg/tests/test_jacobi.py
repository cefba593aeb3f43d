import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sflowkit.jacobi import jacobi_eigvalsh


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33, 64])
def test_matches_lapack(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    A = A + A.T
    got = jacobi_eigvalsh(A)
    want = np.linalg.eigvalsh(A)
    assert np.allclose(got, want, atol=1e-10 * max(1, np.abs(want).max()))


def test_diagonal_and_zero():
    assert np.allclose(jacobi_eigvalsh(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    assert np.allclose(jacobi_eigvalsh(np.zeros((4, 4))), 0)


def test_widely_scaled_entries():
    A = np.diag([1e8, 1.0, -1e-6]) + 1e-3 * (np.ones((3, 3)) - np.eye(3))
    assert np.allclose(jacobi_eigvalsh(A), np.linalg.eigvalsh(A), rtol=1e-9, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10**6))
def test_trace_and_order(n, seed):
    A = np.random.default_rng(seed).uniform(-5, 5, (n, n))
    A = A + A.T
    ev = jacobi_eigvalsh(A)
    assert np.all(np.diff(ev) >= 0)
    assert ev.sum() == pytest.approx(np.trace(A), abs=1e-9)
