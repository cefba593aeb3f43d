"""Cyclic Jacobi eigenvalues for small dense symmetric matrices.

Rotations are applied in round-robin order: each round annihilates n/2
disjoint (p, q) pairs at once, so one round is a handful of vectorized
row/column updates.
"""
import numpy as np


def _rounds(n):
    """Round-robin schedule of disjoint pairs covering all n(n-1)/2 pairs (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigvalsh(A, tol=1e-12, max_sweeps=60):
    """Ascending eigenvalues of the symmetric matrix A.

    Stops when the off-diagonal Frobenius norm drops below tol * ||A||_F.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return A.diagonal().copy()
    A = 0.5 * (A + A.T)
    padded = n % 2 == 1
    if padded:
        # a decoupled extra row stays decoupled under every rotation
        B = np.zeros((n + 1, n + 1))
        B[:n, :n] = A
        A = B
    m = A.shape[0]
    scale = np.linalg.norm(A)
    if scale == 0:
        return np.zeros(n)
    target = tol * scale
    rounds = _rounds(m)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= target:
            break
        for p, q in rounds:
            apq = A[p, q]
            app = A[p, p]
            aqq = A[q, q]
            nz = apq != 0
            theta = (aqq - app) / (2.0 * np.where(nz, apq, 1.0))
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(big, 0.5 / np.where(big, theta, 1.0),
                         np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th * th + 1.0)))
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Ap = A[:, p].copy()
            Aq = A[:, q].copy()
            A[:, p] = c * Ap - s * Aq
            A[:, q] = s * Ap + c * Aq
            Ap = A[p, :].copy()
            Aq = A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            A[p, q] = 0.0
            A[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    ev = A.diagonal()[:n] if padded else A.diagonal()
    return np.sort(ev)
