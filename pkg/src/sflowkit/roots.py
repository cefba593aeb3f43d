"""Vectorized bracket refinement used by the crossing finders.

Both routines evaluate `pts` points per pass, so a vectorized objective
costs one batched call per pass instead of one call per bisection step.
"""
import numpy as np


def refine_sign_change(f, lo, hi, tol, pts=33, max_pass=200):
    """Shrink [lo, hi] around a sign change of f until hi - lo <= tol."""
    flo = np.sign(f(np.array([lo]))[0])
    for _ in range(max_pass):
        if hi - lo <= tol:
            break
        xs = np.linspace(lo, hi, pts)
        fs = np.sign(f(xs))
        if flo == 0:
            return lo
        hit = np.nonzero(fs != flo)[0]
        if len(hit) == 0:
            # sign change lost to noise; keep the smallest |f| point
            return float(xs[np.argmin(np.abs(f(xs)))])
        j = hit[0]
        if j == 0:
            return float(lo)
        if fs[j] == 0:
            return float(xs[j])
        lo, hi = xs[j - 1], xs[j]
    return 0.5 * (lo + hi)


def refine_minimum(g, lo, hi, tol, pts=33, max_pass=200):
    """Locate a local minimum of g in [lo, hi] to width tol; returns (x, g(x))."""
    best_x, best_g = lo, np.inf
    for _ in range(max_pass):
        xs = np.linspace(lo, hi, pts)
        gs = g(xs)
        i = int(np.argmin(gs))
        if gs[i] < best_g:
            best_x, best_g = float(xs[i]), float(gs[i])
        if hi - lo <= tol:
            break
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, pts - 1)]
    return best_x, best_g
