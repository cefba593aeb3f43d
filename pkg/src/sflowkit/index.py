"""Mode-by-mode blocks, the half-integer index i(A) and its spectral flow formula.

For x-independent coefficients the operator splits into 2x2 blocks, one per
Dirichlet eigenvalue lambda_k, written in the basis
{(e_k, -e_k)/sqrt2, (e_k, e_k)/sqrt2}:

    L^k = diag(-1, 1) - 1/(2 lambda_k) [[a-2b+c, a-c], [a-c, a+2b+c]]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering

import numpy as np

from .coefficients import CoefficientPath, SymMat2, negated_eigenvalues, uniform_bound
from .errors import DegenerateCrossing, InvalidEndpoint
from .roots import refine_minimum, refine_sign_change

SINGULAR_TOL = 1e-10
SCAN_DENSITY = 4096
LAMBDA_TOL = 1e-12


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Exact half-integer stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value):
        if isinstance(value, HalfInt):
            return value
        doubled = 2 * value
        if doubled != int(doubled):
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(doubled))

    @property
    def is_integer(self):
        return self.doubled % 2 == 0

    def __add__(self, other):
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled == other.doubled
        if isinstance(other, (int, np.integer)):
            return self.doubled == 2 * int(other)
        if isinstance(other, float):
            return self.doubled == 2 * other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled < other.doubled
        return self.doubled < 2 * other

    def __hash__(self):
        return hash(self.doubled)

    def __int__(self):
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.doubled // 2

    def __float__(self):
        return self.doubled / 2

    def __str__(self):
        if self.is_integer:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


@dataclass(frozen=True)
class Block:
    k: int
    lambda_k: float
    matrix: SymMat2


@dataclass
class ConstCrossing:
    """A singular block: L^k is not invertible at lambda0."""

    lambda0: float
    k: int
    kernel_dim: int
    form: np.ndarray = field(default=None, repr=False)
    regular: bool = True
    local_sflow: int = 0

    def to_dict(self):
        return {
            "lambda0": self.lambda0,
            "k": self.k,
            "kernel_dim": self.kernel_dim,
            "form": None if self.form is None else np.asarray(self.form).tolist(),
            "regular": self.regular,
            "local_sflow": self.local_sflow,
        }


def block_entries(a, b, c, lam_k):
    """(p, q, r) of L^k; broadcasts over arrays."""
    s = 0.5 / lam_k
    return (-1.0 - s * (a - 2 * b + c), -s * (a - c), 1.0 - s * (a + 2 * b + c))


def block_rates(da, db, dc, lam_k):
    s = 0.5 / lam_k
    return (-s * (da - 2 * db + dc), -s * (da - dc), -s * (da + 2 * db + dc))


def block(path, lam, k, spectrum):
    path.require_constant()
    lam_k = spectrum.eigenvalue(k)
    a, b, c = path.values(lam)
    return Block(k, lam_k, SymMat2(*block_entries(a, b, c, lam_k)))


def signature(m, tol=SINGULAR_TOL):
    """(#eigenvalues > tol) - (#eigenvalues < -tol)."""
    if isinstance(m, SymMat2):
        eig = m.eigvalsh()
    else:
        m = np.atleast_2d(np.asarray(m, dtype=float))
        eig = np.linalg.eigvalsh(0.5 * (m + m.T)) if m.size else []
    return int(sum(1 for e in eig if e > tol) - sum(1 for e in eig if e < -tol))


def _tol(m):
    return SINGULAR_TOL * max(1.0, m.norm())


def _is_singular(m):
    lo, hi = m.eigvalsh()
    return min(abs(lo), abs(hi)) <= _tol(m)


def cutoff_k0(path, spectrum, lambda_span=None, **grid):
    """Smallest k with lambda_k above the sup of max(|alpha|, |beta|) over the path."""
    path.require_constant()
    bound = uniform_bound(path, lambda_span=lambda_span, **grid)
    return _first_above(spectrum, bound)


def _first_above(spectrum, bound):
    return len(spectrum.up_to(bound)) + 1


def _local_k0(path, lam, spectrum):
    lo, hi = negated_eigenvalues(*path.values(lam))
    return _first_above(spectrum, max(abs(float(lo)), abs(float(hi))))


def index(path, lam, spectrum):
    """i(A_lambda) = 1/2 sum_k sgn(L^k_lambda), as an exact HalfInt."""
    path.require_constant()
    k0 = _local_k0(path, lam, spectrum)
    total = 0
    for k in range(1, k0):
        m = block(path, lam, k, spectrum).matrix
        total += signature(m, _tol(m))
    return HalfInt(total)


def singular_blocks(path, lam, spectrum):
    path.require_constant()
    k0 = _local_k0(path, lam, spectrum)
    return [k for k in range(1, k0) if _is_singular(block(path, lam, k, spectrum).matrix)]


def spectral_flow_constant(path, spectrum, lambda_span=None):
    """i(A_end) - i(A_start); requires invertible endpoint blocks."""
    lo, hi = lambda_span or path.lambda_range
    for lam in (lo, hi):
        bad = singular_blocks(path, lam, spectrum)
        if bad:
            raise InvalidEndpoint(f"block(s) {bad} singular at endpoint lambda = {lam}")
    flow = index(path, hi, spectrum) - index(path, lo, spectrum)
    return int(flow)


def _block_form(path, lam0, k, lam_k, kernel_vecs):
    da, db, dc = path.rates(lam0)
    p, q, r = block_rates(da, db, dc, lam_k)
    dB = np.array([[p, q], [q, r]])
    return kernel_vecs.T @ dB @ kernel_vecs


def enumerate_crossings_constant(path, spectrum, interval=None, tol=LAMBDA_TOL, density=SCAN_DENSITY):
    """All instants in the open interval where some block L^k is singular.

    Dense scan of det(L^k) for sign changes plus local minima of the
    smallest |eigenvalue|, refined to `tol`. Records carry the block's
    crossing form and the signature jump of the block across lambda0.
    """
    path.require_constant()
    lo, hi = interval or path.lambda_range
    k0 = cutoff_k0(path, spectrum, lambda_span=(lo, hi))
    npts = max(int(np.ceil((hi - lo) * density)) + 1, 3)
    grid = np.linspace(lo, hi, npts)
    spacing = grid[1] - grid[0]
    a, b, c = path.values(grid)
    out = []
    for k in range(1, k0):
        lam_k = spectrum.eigenvalue(k)

        def det_of(lams, lam_k=lam_k):
            p, q, r = block_entries(*path.values(lams), lam_k)
            return p * r - q * q

        def smallest(lams, lam_k=lam_k):
            p, q, r = block_entries(*path.values(lams), lam_k)
            rad = np.hypot(0.5 * (p - r), q)
            mean = 0.5 * (p + r)
            return np.minimum(np.abs(mean - rad), np.abs(mean + rad))

        p, q, r = block_entries(a, b, c, lam_k)
        det = p * r - q * q
        sig = smallest(grid)
        roots = []
        sign = np.sign(det)
        for i in range(npts - 1):
            s0, s1 = sign[i], sign[i + 1]
            if s0 == 0 or s0 * s1 > 0:
                continue
            if s1 == 0:
                s2 = sign[i + 2] if i + 2 < npts else -s0
                if s0 * s2 > 0:
                    continue  # tangential zero on a grid point, found as a minimum below
            roots.append(refine_sign_change(det_of, grid[i], grid[i + 1], tol))
        for i in range(1, npts - 1):
            if not (sig[i] < sig[i - 1] and sig[i] <= sig[i + 1]):
                continue
            no_change = sign[i - 1] * sign[i] > 0 and sign[i] * sign[i + 1] > 0
            touching = sign[i] == 0 and sign[i - 1] * sign[i + 1] > 0
            if not (no_change or touching):
                continue
            x, g = refine_minimum(smallest, grid[i - 1], grid[i + 1], tol)
            m = SymMat2(*block_entries(*path.values(x), lam_k))
            if g <= _kernel_tol(path, x, lam_k, m, tol):
                roots.append(x)
        roots = sorted(r for r in roots if lo < r < hi)
        for r0, r1 in zip(roots, roots[1:]):
            if r1 - r0 < 2 * spacing:
                raise DegenerateCrossing(
                    f"block {k}: crossings at {r0:.12g} and {r1:.12g} closer than scan resolution")
        for lam0 in roots:
            out.append(_make_const_crossing(path, spectrum, lam0, k, lam_k, tol))
    out.sort(key=lambda cr: (cr.lambda0, cr.k))
    return out


def _kernel_tol(path, lam, lam_k, m, tol):
    da, db, dc = path.rates(lam)
    rate = SymMat2(*block_rates(da, db, dc, lam_k)).norm()
    return max(_tol(m), 10 * tol * rate)


def _make_const_crossing(path, spectrum, lam0, k, lam_k, tol):
    m = SymMat2(*block_entries(*path.values(lam0), lam_k))
    eig, vec = np.linalg.eigh(m.to_array())
    thr = _kernel_tol(path, lam0, lam_k, m, tol)
    ker = np.abs(eig) <= thr
    dim = int(np.count_nonzero(ker))
    if dim == 0:
        # refinement landed just outside the threshold; keep the smallest mode
        ker = np.abs(eig) == np.min(np.abs(eig))
        dim = 1
    form = _block_form(path, lam0, k, lam_k, vec[:, ker])
    feig = np.linalg.eigvalsh(form)
    ftol = 1e-8 * max(1.0, float(np.max(np.abs(feig))))
    regular = bool(np.all(np.abs(feig) > ftol))
    eps = min(1e-6, 0.25 / SCAN_DENSITY)
    before = SymMat2(*block_entries(*path.values(lam0 - eps), lam_k))
    after = SymMat2(*block_entries(*path.values(lam0 + eps), lam_k))
    jump = signature(after, _tol(after)) - signature(before, _tol(before))
    return ConstCrossing(float(lam0), k, dim, form, regular, jump // 2)


def szulkin_jump_points(A, lambda_range, spectrum):
    """Instants where i(lambda A) jumps, for a constant matrix A = [[a, b], [b, c]]."""
    if isinstance(A, SymMat2):
        a, b, c = A.p, A.q, A.r
    else:
        (a, b), (_, c) = np.asarray(A, dtype=float)
    path = CoefficientPath.linear(a, b, c, lambda_range=tuple(lambda_range))
    crossings = enumerate_crossings_constant(path, spectrum, tuple(lambda_range))
    by_lambda = {}
    for cr in crossings:
        by_lambda.setdefault(round(cr.lambda0, 9), []).append(cr)
    return [min(g, key=lambda cr: cr.k).lambda0 for _, g in sorted(by_lambda.items())
            if sum(cr.local_sflow for cr in g) != 0]
