"""Shooting for the linearised system on (0, L) and crossing forms of its kernels.

    -u'' = b u + c v,   -v'' = a u + b v,   u = v = 0 at both ends.

Two fundamental solutions start from (u, v) = 0 with (u', v') = e_1, e_2. Their
end values form the 2x2 matrix W; the linearisation at lambda has a kernel
exactly when W(lambda) is singular. The integrator is an embedded
Dormand-Prince 5(4) pair run on a whole batch of lambda values at once with
a shared step size.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import expr as ex
from .errors import IntegrationFailure, InvalidEndpoint, IrregularCrossing, UnresolvedCluster
from .numerics import Numerics
from .roots import refine_minimum, refine_sign_change

# Dormand-Prince 5(4) tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
ERR = B5 - B4

FORM_TOL = 1e-8


class _Coefficients:
    """(a, b, c) at a batch of lambdas; constant-in-x expressions are evaluated once."""

    def __init__(self, path, lams):
        self.path = path
        self.lams = lams
        self.const = not any(ex.depends_on(e, "x") for e in (path.a, path.b, path.c))
        if self.const:
            self.cached = tuple(np.broadcast_to(v, lams.shape) for v in path.values(lams, 0.0, check=False))

    def __call__(self, x):
        if self.const:
            return self.cached
        return self.path.values(self.lams, x, check=False)


def _rhs(coef, x, y):
    a, b, c = coef(x)
    a, b, c = a[:, None], b[:, None], c[:, None]
    u, v, p, q = y[:, 0::4], y[:, 1::4], y[:, 2::4], y[:, 3::4]
    out = np.empty_like(y)
    out[:, 0::4] = p
    out[:, 1::4] = q
    out[:, 2::4] = -(b * u + c * v)
    out[:, 3::4] = -(a * u + b * v)
    return out


def _initial(batch):
    y = np.zeros((batch, 8))
    y[:, 2] = 1.0  # u1'(0)
    y[:, 7] = 1.0  # v2'(0)
    return y


def integrate(path, lams, length=math.pi, rk_tol=1e-10, mesh=None, max_steps=200000):
    """Fundamental solutions at x = length for every lambda in `lams`.

    Returns the (B, 8) end state, or with `mesh` (number of subintervals) also
    the (mesh+1, B, 8) states on the uniform output mesh.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    coef = _Coefficients(path, lams)
    y = _initial(len(lams))
    x = 0.0
    h = min(0.01 * length, length / mesh if mesh else length)
    hmin = 1e-14 * length
    marks = np.linspace(0.0, length, mesh + 1) if mesh else None
    saved = [y.copy()] if mesh else None
    next_mark = 1
    k1 = _rhs(coef, x, y)
    steps = 0
    while x < length:
        target = marks[next_mark] if mesh else length
        step = min(h, target - x)
        if step < hmin:
            raise IntegrationFailure(f"step size underflow at x = {x:.6g}")
        ks = [k1]
        for i in range(1, 7):
            yi = y + step * sum(A[i][j] * ks[j] for j in range(i) if A[i][j] != 0.0)
            ks.append(_rhs(coef, x + C[i] * step, yi))
        y_new = y + step * sum(B5[j] * ks[j] for j in range(6) if B5[j] != 0.0)
        err_vec = step * sum(ERR[j] * ks[j] for j in range(7) if ERR[j] != 0.0)
        scale = rk_tol + rk_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.max(np.mean((err_vec / scale) ** 2, axis=1))))
        if not np.isfinite(err):
            raise IntegrationFailure("non-finite state during integration")
        if err <= 1.0:
            x = target if step == target - x else x + step
            y = y_new
            k1 = ks[6]  # first-same-as-last
            if mesh and x == target:
                saved.append(y.copy())
                next_mark += 1
            fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        clipped = step < h
        h = max(h, step * fac) if (clipped and err <= 1.0) else step * fac
        steps += 1
        if steps > max_steps:
            raise IntegrationFailure("too many steps")
    if mesh:
        return y, np.array(saved)
    return y


@dataclass
class EndMatrix:
    lam: float
    W: np.ndarray
    scale: float  # norm of the full 4x2 end state, never zero

    @property
    def det(self):
        return float(np.linalg.det(self.W))


def _end_matrices(y):
    """W (B, 2, 2) and the end-state scale (B,) from a (B, 8) end state."""
    W = np.stack([np.stack([y[:, 0], y[:, 4]], -1), np.stack([y[:, 1], y[:, 5]], -1)], 1)
    scale = np.sqrt(np.sum(y * y, axis=1))
    return W, scale


def shoot(path, lam, rk_tol=1e-10, length=math.pi):
    y = integrate(path, [lam], length, rk_tol)
    W, scale = _end_matrices(y)
    return EndMatrix(float(lam), W[0], float(scale[0]))


def _det_batch(path, length, rk_tol):
    def f(lams):
        W, _ = _end_matrices(integrate(path, lams, length, rk_tol))
        return W[:, 0, 0] * W[:, 1, 1] - W[:, 0, 1] * W[:, 1, 0]
    return f


def _smin_batch(path, length, rk_tol):
    def g(lams):
        W, scale = _end_matrices(integrate(path, lams, length, rk_tol))
        return np.linalg.svd(W, compute_uv=False)[:, -1] / scale
    return g


@dataclass
class KernelBasis:
    x: np.ndarray
    curves: np.ndarray  # (dim, 2, mesh+1): u and v of each basis element

    @property
    def dim(self):
        return self.curves.shape[0]

    def transformed(self, P):
        """Basis change z'_i = sum_j P[j, i] z_j."""
        return KernelBasis(self.x, np.einsum("ji,jkx->ikx", np.asarray(P, dtype=float), self.curves))

    def to_csv(self, path_out):
        with open(path_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            head = ["x"]
            for i in range(self.dim):
                head += [f"u{i + 1}", f"v{i + 1}"]
            w.writerow(head)
            for j, xv in enumerate(self.x):
                row = [f"{xv:.17g}"]
                for i in range(self.dim):
                    row += [f"{self.curves[i, 0, j]:.17g}", f"{self.curves[i, 1, j]:.17g}"]
                w.writerow(row)


def kernel(path, lam, tol=None, numerics=None, length=math.pi, with_basis=True):
    """(dim, basis): singular values of W below tol * scale, and the kernel curves."""
    num = numerics or Numerics()
    tol = num.sv_tol if tol is None else tol
    if with_basis:
        y, states = integrate(path, [lam], length, num.rk_tol, mesh=num.kernel_mesh)
    else:
        y = integrate(path, [lam], length, num.rk_tol)
    W, scale = _end_matrices(y)
    _, s, Vt = np.linalg.svd(W[0])
    null = s <= tol * scale[0]
    dim = int(np.count_nonzero(null))
    assert dim <= 2
    if not with_basis:
        return dim, None
    x = np.linspace(0.0, length, num.kernel_mesh + 1)
    if dim == 0:
        return 0, KernelBasis(x, np.zeros((0, 2, len(x))))
    st = states[:, 0, :]
    fund = np.stack([np.stack([st[:, 0], st[:, 1]]), np.stack([st[:, 4], st[:, 5]])])  # (2 fund, 2 comp, X)
    curves = np.einsum("dj,jkx->dkx", Vt[null], fund)
    # L2-orthonormalise
    out = []
    for cur in curves:
        for prev in out:
            cur = cur - _inner(x, cur, prev) * prev
        out.append(cur / math.sqrt(_inner(x, cur, cur)))
    return dim, KernelBasis(x, np.array(out))


def _inner(x, z, w):
    return float(simpson(z[0] * w[0] + z[1] * w[1], x=x))


def crossing_form(path, lam0, basis):
    """Gamma_ij = -int adot u_i u_j + bdot (u_i v_j + v_i u_j) + cdot v_i v_j dx."""
    x = basis.x
    da, db, dc = (np.broadcast_to(r, x.shape) for r in path.rates(lam0, x))
    d = basis.dim
    form = np.zeros((d, d))
    for i in range(d):
        ui, vi = basis.curves[i]
        for j in range(i, d):
            uj, vj = basis.curves[j]
            val = -simpson(da * ui * uj + db * (ui * vj + vi * uj) + dc * vi * vj, x=x)
            form[i, j] = form[j, i] = val
    return form


def local_sflow(form, tol=None):
    """(signature, regular) of a symmetric form."""
    form = np.atleast_2d(np.asarray(form, dtype=float))
    if form.size == 0:
        return 0, False
    eig = np.linalg.eigvalsh(0.5 * (form + form.T))
    tol = FORM_TOL * max(1.0, float(np.max(np.abs(eig)))) if tol is None else tol
    sig = int(np.count_nonzero(eig > tol) - np.count_nonzero(eig < -tol))
    return sig, bool(np.all(np.abs(eig) > tol))


def posdef_test(path, lam0, x_grid=512, length=math.pi):
    """adot != 0 and adot * cdot - bdot^2 > 0 at every grid x."""
    x = np.linspace(0.0, length, x_grid)
    da, db, dc = (np.broadcast_to(r, x.shape) for r in path.rates(lam0, x))
    return bool(np.all(da != 0) and np.all(da * dc - db * db > 0))


@dataclass
class CrossingRecord:
    lambda0: float
    kernel_dim: int
    form: np.ndarray
    local_sflow: int
    regular: bool
    posdef: bool = False
    basis: KernelBasis | None = field(default=None, repr=False)

    def to_dict(self):
        return {"lambda0": self.lambda0, "kernel_dim": self.kernel_dim,
                "form": np.asarray(self.form).tolist(), "local_sflow": self.local_sflow,
                "regular": self.regular, "posdef": self.posdef}


def find_crossings(path, interval=None, grid=None, tol=None, numerics=None, length=math.pi):
    """Sorted lambda0 in the open interval where W(lambda) is singular."""
    num = numerics or Numerics()
    grid = grid or num.crossing_grid
    tol = tol or num.lambda_tol
    lo, hi = interval or path.lambda_range
    lams = np.linspace(lo, hi, grid)
    det_f = _det_batch(path, length, num.rk_tol)
    smin_f = _smin_batch(path, length, num.rk_tol)
    y = integrate(path, lams, length, num.rk_tol)
    W, scale = _end_matrices(y)
    det = W[:, 0, 0] * W[:, 1, 1] - W[:, 0, 1] * W[:, 1, 0]
    sig = np.linalg.svd(W, compute_uv=False)[:, -1] / scale
    sign = np.sign(det)
    roots = []
    for i in range(grid - 1):
        s0, s1 = sign[i], sign[i + 1]
        if s0 == 0 or s0 * s1 > 0:
            continue
        if s1 == 0 and i + 2 < grid and s0 * sign[i + 2] > 0:
            continue
        roots.append(refine_sign_change(det_f, lams[i], lams[i + 1], tol))
    for i in range(1, grid - 1):
        if not (sig[i] < sig[i - 1] and sig[i] <= sig[i + 1]):
            continue
        no_change = sign[i - 1] * sign[i] > 0 and sign[i] * sign[i + 1] > 0
        touching = sign[i] == 0 and sign[i - 1] * sign[i + 1] > 0
        if not (no_change or touching):
            continue
        x0, g0 = refine_minimum(smin_f, lams[i - 1], lams[i + 1], tol)
        if g0 <= num.sv_tol:
            roots.append(x0)
    roots = sorted(r for r in roots if lo < r < hi)
    for r0, r1 in zip(roots, roots[1:]):
        if r1 - r0 < 10 * tol:
            raise UnresolvedCluster(f"crossing candidates {r0:.15g} and {r1:.15g} are not separated")
    return roots


def crossing_records(path, numerics=None, interval=None, length=math.pi):
    num = numerics or Numerics()
    out = []
    for lam0 in find_crossings(path, interval, numerics=num, length=length):
        dim, basis = kernel(path, lam0, numerics=num, length=length)
        if dim == 0:
            # refinement sits just above the threshold; take the smallest singular direction
            dim, basis = kernel(path, lam0, tol=np.inf, numerics=num, length=length)
            if dim == 2:
                dim, basis = _smallest_direction(path, lam0, num, length)
        form = crossing_form(path, lam0, basis)
        sfl, regular = local_sflow(form)
        assert abs(sfl) <= dim
        out.append(CrossingRecord(float(lam0), dim, form, sfl, regular,
                                  posdef_test(path, lam0, num.x_grid, length), basis))
    return out


def _smallest_direction(path, lam, num, length):
    y = integrate(path, [lam], length, num.rk_tol)
    W, scale = _end_matrices(y)
    s = np.linalg.svd(W[0], compute_uv=False)
    return kernel(path, lam, tol=s[-1] / scale[0] * (1 + 1e-9), numerics=num, length=length)


def total_sflow_crossings(path, numerics=None, length=math.pi, records=None):
    """Sum of local spectral flows over the crossings inside the parameter range."""
    num = numerics or Numerics()
    lo, hi = path.lambda_range
    for lam in (lo, hi):
        dim, _ = kernel(path, lam, numerics=num, length=length, with_basis=False)
        if dim:
            raise InvalidEndpoint(f"kernel of dimension {dim} at endpoint lambda = {lam}")
    recs = crossing_records(path, num, length=length) if records is None else records
    bad = [r.lambda0 for r in recs if not r.regular]
    if bad:
        raise IrregularCrossing(bad)
    return int(sum(r.local_sflow for r in recs))
