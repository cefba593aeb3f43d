"""Finite truncations of L = T + K in the mode basis and their Morse indices.

Basis order: for k = 1..n the pair f1 = (e_k, -e_k)/sqrt2, f2 = (e_k, e_k)/sqrt2,
so mode k occupies rows 2(k-1) and 2(k-1)+1. The e_k are Dirichlet
eigenfunctions normalised in H^1_0, which gives int e_k^2 = 1/lambda_k.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig as generalized_eig

from .coefficients import uniform_bound
from .errors import NotConverged, XDependentUnsupported
from .jacobi import jacobi_eigvalsh
from .spectrum import DomainSpec, rectangle_modes

ZERO_TOL = 1e-10
GL_NODES = 8
PANELS_PER_MODE = 4


@dataclass
class GalerkinConfig:
    n_start: int = 8
    n_max: int = 256
    delta: float | None = None
    delta_floor: float = 1e-8
    quad_nodes: int = GL_NODES
    panels_per_mode: int = PANELS_PER_MODE
    eigensolver: str = "jacobi"


@dataclass
class TruncatedOperator:
    n: int
    matrix: np.ndarray
    lam: float | None = None


@dataclass
class SflowResult:
    value: int
    n_used: int
    delta_used: float
    stable: bool
    history: list = field(default_factory=list)

    def to_dict(self):
        return {"value": self.value, "n_used": self.n_used, "delta_used": self.delta_used,
                "stable": self.stable, "history": self.history}


def eigvalsh(m, method="jacobi"):
    if method == "jacobi":
        return jacobi_eigvalsh(m)
    if method == "lapack":
        return np.linalg.eigvalsh(m)
    raise ValueError(f"unknown eigensolver {method!r}")


def composite_gauss(lo, hi, panels, nodes=GL_NODES):
    """Nodes and weights of composite Gauss-Legendre on [lo, hi]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def interval_basis(L, n, x):
    """e_k(x) = sqrt(2/L) sin(k pi x / L) / (k pi / L), rows k = 1..n."""
    freq = np.arange(1, n + 1)[:, None] * math.pi / L
    return math.sqrt(2.0 / L) * np.sin(freq * x[None, :]) / freq


def _combine(Ma, Mb, Mc, n):
    """Interleave the three mass matrices into the K matrix on the f1/f2 basis."""
    K = np.empty((2 * n, 2 * n))
    sig = (1.0, 1.0)
    tau = (-1.0, 1.0)
    for i in range(2):
        for j in range(2):
            K[i::2, j::2] = -0.5 * (sig[i] * sig[j] * Ma
                                    + (sig[i] * tau[j] + tau[i] * sig[j]) * Mb
                                    + tau[i] * tau[j] * Mc)
    return 0.5 * (K + K.T)


def _t_matrix(n):
    return np.diag(np.tile([-1.0, 1.0], n))


def _mass_interval(path, L, n, lam, cfg):
    x, w = composite_gauss(0.0, L, cfg.panels_per_mode * max(n, 1), cfg.quad_nodes)
    E = interval_basis(L, n, x)
    a, b, c = (np.broadcast_to(v, x.shape) for v in path.values(lam, x))
    return tuple((E * (w * f)) @ E.T for f in (a, b, c))


def _mass_rectangle(path, sides, n, lam, cfg):
    if path.x_dependent:
        raise XDependentUnsupported("x-dependent coefficients are supported on intervals only")
    A, B = sides
    modes = rectangle_modes(A, B, n)
    vals = np.array([v for v, _, _ in modes])
    ms = np.array([m for _, m, _ in modes])
    ps = np.array([p for _, _, p in modes])
    top = int(max(ms.max(), ps.max()))
    panels = cfg.panels_per_mode * top

    def gram(length, idx):
        x, w = composite_gauss(0.0, length, panels, cfg.quad_nodes)
        phi = math.sqrt(2.0 / length) * np.sin(np.outer(idx, x) * math.pi / length)
        return (phi * w) @ phi.T

    G = gram(A, ms) * gram(B, ps) / np.sqrt(np.outer(vals, vals))
    a, b, c = (float(v) for v in path.values(lam, 0.0))
    return a * G, b * G, c * G


def assemble_form(path, domain, n, lam, config=None):
    """Matrix of Q_n K_lambda Q_n alone."""
    cfg = config or GalerkinConfig()
    domain = domain or DomainSpec.interval()
    if domain.is_interval:
        Ma, Mb, Mc = _mass_interval(path, domain.length, n, lam, cfg)
    else:
        Ma, Mb, Mc = _mass_rectangle(path, domain.sides, n, lam, cfg)
    return _combine(Ma, Mb, Mc, n)


def assemble(path, domain, n, lam, config=None):
    """T + Q_n K_lambda Q_n as a 2n x 2n symmetric matrix."""
    K = assemble_form(path, domain, n, lam, config)
    return TruncatedOperator(n, _t_matrix(n) + K, float(lam))


def morse_index(t, delta=0.0, method="jacobi"):
    m = t.matrix if isinstance(t, TruncatedOperator) else np.asarray(t, dtype=float)
    if m.size == 0:
        return 0
    ev = eigvalsh(m, method) + delta
    return int(np.count_nonzero(ev < 0))


def tail_norm(path, domain, n, **grid):
    """Bound for sup_lambda ||Q_n^perp K Q_n^perp||: uniform bound / lambda_{n+1}."""
    domain = domain or DomainSpec.interval()
    if domain.is_interval:
        span = (0.0, domain.length)
    else:
        if path.x_dependent:
            raise XDependentUnsupported("x-dependent coefficients are supported on intervals only")
        span = (0.0, 1.0)
    bound = uniform_bound(path, x_span=span, **grid)
    return bound / domain.spectrum(n + 1).eigenvalue(n + 1)


def tail_block_norm(path, domain, n, n_big, lambdas, config=None):
    """max over `lambdas` of the spectral norm of the assembled K restricted to modes n+1..n_big."""
    worst = 0.0
    for lam in lambdas:
        K = assemble_form(path, domain, n_big, lam, config)[2 * n:, 2 * n:]
        if K.size:
            worst = max(worst, float(np.max(np.abs(np.linalg.eigvalsh(K)))))
    return worst


def _endpoint_shift(ev0, ev1, cfg):
    both = np.concatenate([ev0, ev1])
    nonzero = np.abs(both)[np.abs(both) > ZERO_TOL]
    margin = min(1.0, float(nonzero.min())) if nonzero.size else 1.0
    singular = bool(np.any(np.abs(both) <= ZERO_TOL))
    if cfg.delta is not None:
        delta = float(cfg.delta)
    elif singular:
        delta = max(cfg.delta_floor, 0.5 * margin)
    else:
        delta = 0.0
    return delta, margin


def sflow_galerkin(path, domain=None, config=None):
    """sfl = mu(lambda_0) - mu(lambda_1) of the (possibly delta-shifted) truncations.

    n doubles from n_start; the value is accepted once it has survived two
    doublings unchanged and the tail bound sits below the endpoint margin.
    """
    cfg = config or GalerkinConfig()
    domain = domain or DomainSpec.interval()
    lo, hi = path.lambda_range
    values = []
    history = []
    n = cfg.n_start
    while n <= cfg.n_max:
        ev0 = eigvalsh(assemble(path, domain, n, lo, cfg).matrix, cfg.eigensolver)
        ev1 = eigvalsh(assemble(path, domain, n, hi, cfg).matrix, cfg.eigensolver)
        delta, margin = _endpoint_shift(ev0, ev1, cfg)
        value = int(np.count_nonzero(ev0 + delta < 0) - np.count_nonzero(ev1 + delta < 0))
        tail = tail_norm(path, domain, n)
        values.append(value)
        history.append({"n": n, "value": value, "tail_norm": tail, "margin": margin, "delta": delta})
        if len(values) >= 3 and values[-1] == values[-2] == values[-3] and tail < margin:
            return SflowResult(value, n, delta, True, history)
        n *= 2
    raise NotConverged(f"Galerkin spectral flow not stable up to n_max = {cfg.n_max}: {values}")


def eigen_track(path, domain, n, lambdas, config=None):
    """Sorted eigenvalues of the truncation at each lambda; returns (lambdas, 2D array)."""
    cfg = config or GalerkinConfig()
    lambdas = np.asarray(lambdas, dtype=float)
    rows = [eigvalsh(assemble(path, domain, n, lam, cfg).matrix, cfg.eigensolver) for lam in lambdas]
    return lambdas, np.array(rows).reshape(len(lambdas), 2 * n)


def write_eigen_csv(path_out, lambdas, eigenvalues):
    width = eigenvalues.shape[1] if eigenvalues.ndim == 2 else 0
    with open(path_out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda"] + [f"ev{i}" for i in range(1, width + 1)])
        for lam, row in zip(lambdas, eigenvalues):
            w.writerow([f"{lam:.17g}"] + [f"{v:.17g}" for v in row])


def sflow_matrix_path(A0, A1, tol=1e-9):
    """Spectral flow of the finite path A0 + t (A1 - A0), t in [0, 1], by crossing forms.

    Crossings are the real generalized eigenvalues t of A0 x = -t D x with
    D = A1 - A0; each contributes the signature of D restricted to the kernel.
    """
    A0 = np.asarray(A0, dtype=float)
    D = np.asarray(A1, dtype=float) - A0
    ts = generalized_eig(A0, -D, right=False)
    cand = sorted({round(float(t.real), 10) for t in ts
                   if np.isfinite(t) and abs(t.imag) < 1e-8 and 0.0 < t.real < 1.0})
    total = 0
    for t in cand:
        w, V = np.linalg.eigh(A0 + t * D)
        ker = V[:, np.abs(w) <= tol * max(1.0, np.max(np.abs(w)))]
        if ker.shape[1] == 0:
            continue
        form = ker.T @ D @ ker
        fe = np.linalg.eigvalsh(0.5 * (form + form.T))
        if np.any(np.abs(fe) <= tol):
            raise ValueError(f"irregular crossing at t = {t}")
        total += int(np.count_nonzero(fe > 0) - np.count_nonzero(fe < 0))
    return total
