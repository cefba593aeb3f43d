"""Finite-difference Newton probe for nontrivial branches near a crossing.

The nonlinear system on (0, L) with Dirichlet ends,

    -u'' = b u + c v + G_v(lambda, x, u, v)
    -v'' = a u + b v + G_u(lambda, x, u, v),

is discretised with the 3-point second difference on m subintervals; the
unknown vector stacks u and v at the m - 1 interior nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import ConfigError, NoBranch
from .numerics import Numerics
from .roots import refine_sign_change


@dataclass
class DiscreteProblem:
    path: object
    G: ex.Expr | None
    m: int
    length: float = math.pi
    derivs: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.h = self.length / self.m
        self.x = np.linspace(0.0, self.length, self.m + 1)[1:-1]
        n = self.m - 1
        self.D2 = (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)) / self.h**2

    @property
    def size(self):
        return 2 * (self.m - 1)

    def split(self, U):
        n = self.m - 1
        return U[:n], U[n:]

    def _g(self, name, lam, u, v):
        e = self.derivs.get(name)
        if e is None:
            return np.zeros_like(self.x)
        return np.broadcast_to(ex.evaluate(e, lam, self.x, u, v), self.x.shape)

    def residual(self, lam, U):
        u, v = self.split(U)
        a, b, c = (np.broadcast_to(t, self.x.shape) for t in self.path.values(lam, self.x))
        Fu = -self.D2 @ u - b * u - c * v - self._g("Gv", lam, u, v)
        Fv = -self.D2 @ v - a * u - b * v - self._g("Gu", lam, u, v)
        return np.concatenate([Fu, Fv])

    def jacobian(self, lam, U=None):
        n = self.m - 1
        U = np.zeros(2 * n) if U is None else U
        u, v = self.split(U)
        a, b, c = (np.broadcast_to(t, self.x.shape) for t in self.path.values(lam, self.x))
        J = np.empty((2 * n, 2 * n))
        J[:n, :n] = -self.D2 - np.diag(b + self._g("Gvu", lam, u, v))
        J[:n, n:] = -np.diag(c + self._g("Gvv", lam, u, v))
        J[n:, :n] = -np.diag(a + self._g("Guu", lam, u, v))
        J[n:, n:] = -self.D2 - np.diag(b + self._g("Guv", lam, u, v))
        return J


def discretize(path, G=None, m=200, length=math.pi, check_lambdas=None):
    """Build the discrete problem; G is an expression in lambda, x, u, v."""
    if m < 16:
        raise ValueError("mesh must have at least 16 subintervals")
    derivs = {}
    Ge = None
    if G is not None and not (isinstance(G, str) and not G.strip()):
        Ge = ex.parse(G, variables=ex.NONLINEARITY_VARS) if isinstance(G, str) else G
        Gu, Gv = ex.diff(Ge, "u"), ex.diff(Ge, "v")
        derivs = {"Gu": Gu, "Gv": Gv, "Guu": ex.diff(Gu, "u"), "Guv": ex.diff(Gu, "v"),
                  "Gvu": ex.diff(Gv, "u"), "Gvv": ex.diff(Gv, "v")}
        lo, hi = path.lambda_range
        lams = np.linspace(lo, hi, 9) if check_lambdas is None else np.asarray(check_lambdas)
        xs = np.linspace(0.0, length, 33)
        L, X = np.meshgrid(lams, xs, indexing="ij")
        for name in ("Gu", "Gv"):
            val = ex.evaluate(derivs[name], L, X, 0.0, 0.0)
            if np.max(np.abs(val)) > 1e-12:
                raise ConfigError(f"G_{name[1]} does not vanish at (u, v) = (0, 0)")
    return DiscreteProblem(path, Ge, m, float(length), derivs)


@dataclass
class BranchSample:
    lam: float
    amplitude: float
    converged: bool
    newton_iters: int
    nontrivial: bool = False

    def to_dict(self):
        return {"lambda": self.lam, "amplitude": self.amplitude, "converged": self.converged,
                "newton_iters": self.newton_iters, "nontrivial": self.nontrivial}


@dataclass
class ProbeResult:
    samples: list
    lambda_star: float
    lambda_star_discrete: float
    side: str
    success: bool

    def to_dict(self):
        return {"lambda_star": self.lambda_star, "lambda_star_discrete": self.lambda_star_discrete,
                "side": self.side, "success": self.success,
                "samples": [s.to_dict() for s in self.samples]}


def newton(problem, lam, U0, tol=1e-10, max_iter=50):
    """(U, converged, iterations); stops on a relative residual or step below tol."""
    U = np.array(U0, dtype=float)
    for it in range(1, max_iter + 1):
        F = problem.residual(lam, U)
        scale = max(np.max(np.abs(U)), 1e-300)
        if np.max(np.abs(F)) <= tol * scale or not np.any(U) and not np.any(F):
            return U, True, it - 1
        dU = np.linalg.solve(problem.jacobian(lam, U), -F)
        U = U + dU
        if np.max(np.abs(dU)) <= tol * max(np.max(np.abs(U)), 1e-300):
            return U, True, it
    return U, False, max_iter


def _det_sign(problem):
    def f(lams):
        return np.array([np.linalg.slogdet(problem.jacobian(lam))[0] for lam in np.atleast_1d(lams)])
    return f


def discrete_critical(problem, lam_guess, window=1e-3, tol=1e-13):
    """Parameter near lam_guess where the discrete linearisation is singular."""
    f = _det_sign(problem)
    for _ in range(12):
        lo, hi = lam_guess - window, lam_guess + window
        if f(lo)[0] * f(hi)[0] < 0:
            return refine_sign_change(f, lo, hi, tol, pts=5)
        window *= 2
    raise NoBranch(f"no sign change of the discrete determinant near lambda = {lam_guess}")


def discrete_kernel(problem, lam):
    """Unit (sup-norm) right singular vector of the smallest singular value of J(lam, 0)."""
    _, _, Vt = np.linalg.svd(problem.jacobian(lam))
    k = Vt[-1]
    k = k / k[np.argmax(np.abs(k))]
    return k


def smallest_singular_value(problem, lam):
    return float(np.linalg.svd(problem.jacobian(lam), compute_uv=False)[-1])


def branch_probe(problem, lam_star, kernel_dir=None, side="right", numerics=None, refine=True):
    """Track a nontrivial branch on one side of lam_star.

    The probe first sweeps outward, lambda_j = lam* +- j h, each Newton solve
    seeded with eps_j * kernel_dir where eps_j is the previous amplitude. It then
    walks back toward lam* with distances h / 2^i until the amplitude drops
    below the target. Samples are returned ordered from far to near.
    """
    num = numerics or Numerics()
    sgn = {"right": 1.0, "left": -1.0}[side]
    lam_d = discrete_critical(problem, lam_star) if refine else float(lam_star)
    if kernel_dir is None:
        kernel_dir = discrete_kernel(problem, lam_d)
    kdir = np.asarray(kernel_dir, dtype=float)
    kdir = kdir / np.max(np.abs(kdir))

    def solve(lam, eps):
        for trial in (eps, 3 * eps, eps / 3):
            U, ok, its = newton(problem, lam, trial * kdir, num.newton_tol, num.newton_max_iter)
            amp = float(np.max(np.abs(U)))
            if ok and amp > num.amplitude_floor:
                return BranchSample(float(lam), amp, True, its, True)
        return BranchSample(float(lam), amp, ok, its, False)

    outward = []
    eps = num.probe_seed
    for j in range(1, num.probe_steps + 1):
        s = solve(lam_d + sgn * j * num.probe_h, eps)
        outward.append(s)
        if s.nontrivial:
            eps = s.amplitude
    if not any(s.nontrivial for s in outward):
        raise NoBranch(f"Newton converged only to the trivial solution on the {side} of {lam_star}")
    inward = []
    d_prev = num.probe_h
    first = next(s for s in outward if s.nontrivial)
    amp = first.amplitude
    d = d_prev
    for _ in range(60):
        if amp < num.probe_target:
            break
        d *= 0.5
        s = solve(lam_d + sgn * d, amp * math.sqrt(d / d_prev))
        inward.append(s)
        if not s.nontrivial:
            break
        amp, d_prev = s.amplitude, d
    samples = sorted(outward + inward, key=lambda s: -abs(s.lam - lam_d))
    return ProbeResult(samples, float(lam_star), float(lam_d), side, _is_success(samples, num))


def _is_success(samples, num):
    good = [s for s in samples if s.converged and s.nontrivial]
    if len(good) < 5 or len(good) != len(samples):
        return False
    amps = [s.amplitude for s in good]
    return all(a1 < a0 for a0, a1 in zip(amps, amps[1:])) and amps[-1] < num.probe_target


def probe_both_sides(problem, lam_star, kernel_dir=None, numerics=None):
    """Probe right then left; sides without a branch are reported as None."""
    out = {}
    for side in ("right", "left"):
        try:
            out[side] = branch_probe(problem, lam_star, kernel_dir, side, numerics)
        except NoBranch:
            out[side] = None
    return out
