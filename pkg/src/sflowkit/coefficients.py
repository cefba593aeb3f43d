"""Coefficient paths (a, b, c) and the two sign conventions built on them.

``coefficient_matrix`` returns [[a, b], [b, c]] as written in the system.
``form_bounds`` works with the negated matrix -[[a, b], [b, c]], whose
extreme eigenvalues over the closed domain are alpha and beta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import expr as ex
from .errors import XDependentUnsupported

DEFAULT_X_GRID = 512
DEFAULT_LAMBDA_GRID = 256


@dataclass(frozen=True)
class SymMat2:
    """Real symmetric matrix [[p, q], [q, r]]."""

    p: float
    q: float
    r: float

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(0.5 * (m[0, 1] + m[1, 0])), float(m[1, 1]))

    def to_array(self):
        return np.array([[self.p, self.q], [self.q, self.r]])

    def eigvalsh(self):
        """Ascending eigenvalues in closed form."""
        mean = 0.5 * (self.p + self.r)
        rad = math.hypot(0.5 * (self.p - self.r), self.q)
        return (mean - rad, mean + rad)

    def det(self):
        return self.p * self.r - self.q * self.q

    def norm(self):
        lo, hi = self.eigvalsh()
        return max(abs(lo), abs(hi))

    def __neg__(self):
        return SymMat2(-self.p, -self.q, -self.r)

    def __add__(self, other):
        return SymMat2(self.p + other.p, self.q + other.q, self.r + other.r)

    def __sub__(self, other):
        return SymMat2(self.p - other.p, self.q - other.q, self.r - other.r)

    def scale(self, s):
        return SymMat2(s * self.p, s * self.q, s * self.r)

    def to_list(self):
        return [[self.p, self.q], [self.q, self.r]]


@dataclass(frozen=True)
class FormBounds:
    alpha: float
    beta: float


@dataclass(frozen=True)
class CoefficientPath:
    """The maps (lambda, x) -> a, b, c of the linearised system.

    ``force_x_dependent`` disables constant-coefficient detection so that
    every engine takes its general (x-dependent) route.
    """

    a: ex.Expr
    b: ex.Expr
    c: ex.Expr
    lambda_range: tuple = (0.0, 1.0)
    force_x_dependent: bool = False
    source: tuple = field(default=None, compare=False)

    @classmethod
    def from_strings(cls, a, b, c, lambda_range=(0.0, 1.0), force_x_dependent=False):
        exprs = [ex.as_expr(s) for s in (a, b, c)]
        lo, hi = float(lambda_range[0]), float(lambda_range[1])
        if not lo < hi:
            raise ValueError("lambda_range must be increasing")
        src = tuple(s if isinstance(s, str) else ex.to_str(e) for s, e in zip((a, b, c), exprs))
        return cls(*exprs, lambda_range=(lo, hi), force_x_dependent=force_x_dependent, source=src)

    @classmethod
    def linear(cls, a, b, c, lambda_range=(0.0, 1.0)):
        """The path lambda * [[a, b], [b, c]] with constant a, b, c."""
        return cls.from_strings(*(f"lambda*{_lit(v)}" for v in (a, b, c)), lambda_range=lambda_range)

    @property
    def x_dependent(self):
        return self.force_x_dependent or any(ex.depends_on(e, "x") for e in (self.a, self.b, self.c))

    @property
    def strings(self):
        return tuple(ex.to_str(e) for e in (self.a, self.b, self.c))

    @cached_property
    def derivatives(self):
        """(a', b', c') with respect to lambda."""
        return tuple(ex.diff_lambda(e) for e in (self.a, self.b, self.c))

    def with_range(self, lo, hi):
        return CoefficientPath(self.a, self.b, self.c, (float(lo), float(hi)), self.force_x_dependent, self.source)

    def reversed(self):
        """The path traversed backwards: lambda -> lo + hi - lambda."""
        lo, hi = self.lambda_range
        repl = ex.BinOp("-", ex.as_expr(lo + hi), ex.Var("lambda"))
        a, b, c = (ex.substitute(e, "lambda", repl) for e in (self.a, self.b, self.c))
        return CoefficientPath(a, b, c, self.lambda_range, self.force_x_dependent)

    def values(self, lam, x=0.0, check=True):
        """(a, b, c) evaluated with broadcasting."""
        return tuple(ex.evaluate(e, lam, x, check=check) for e in (self.a, self.b, self.c))

    def rates(self, lam, x=0.0):
        return tuple(ex.evaluate(e, lam, x) for e in self.derivatives)

    def require_constant(self):
        if self.x_dependent:
            raise XDependentUnsupported("operation requires coefficients independent of x")


def _lit(v):
    v = float(v)
    return repr(v) if v >= 0 else f"({v!r})"


def coefficient_matrix(path, lam, x=0.0):
    """[[a, b], [b, c]] at (lambda, x); not negated."""
    a, b, c = path.values(lam, x)
    return SymMat2(a, b, c)


def negated_eigenvalues(a, b, c):
    """Eigenvalues (lo, hi) of -[[a, b], [b, c]], elementwise over arrays."""
    mean = -0.5 * (np.asarray(a) + np.asarray(c))
    rad = np.sqrt(0.25 * (np.asarray(a) - np.asarray(c)) ** 2 + np.asarray(b) ** 2)
    return mean - rad, mean + rad


def x_samples(x_span, x_grid=DEFAULT_X_GRID):
    lo, hi = x_span
    return np.linspace(lo, hi, x_grid)


def form_bounds(path, lam, x_grid=DEFAULT_X_GRID, x_span=(0.0, math.pi)):
    """(alpha, beta): extreme eigenvalues of -[[a, b], [b, c]] over the closed domain.

    Constant paths use the closed form; x-dependent paths take min/max over a
    uniform grid of `x_grid` points including both endpoints of `x_span`.
    """
    if not path.x_dependent:
        lo, hi = negated_eigenvalues(*path.values(lam, 0.0))
        return FormBounds(float(lo), float(hi))
    if x_grid < 2:
        raise ValueError("x_grid must be at least 2")
    xs = x_samples(x_span, x_grid)
    lo, hi = negated_eigenvalues(*path.values(lam, xs))
    return FormBounds(float(np.min(lo)), float(np.max(hi)))


def uniform_bound(path, lambda_grid=DEFAULT_LAMBDA_GRID, x_grid=DEFAULT_X_GRID, x_span=(0.0, math.pi),
                  lambda_span=None):
    """max over sampled lambda (and x) of max(|alpha|, |beta|)."""
    if lambda_grid < 2:
        raise ValueError("lambda_grid must be at least 2")
    lo, hi = lambda_span or path.lambda_range
    lams = np.linspace(lo, hi, lambda_grid)
    if path.x_dependent:
        if x_grid < 2:
            raise ValueError("x_grid must be at least 2")
        L, X = np.meshgrid(lams, x_samples(x_span, x_grid), indexing="ij")
    else:
        L, X = lams, np.zeros_like(lams)
    e_lo, e_hi = negated_eigenvalues(*path.values(L, X))
    return float(max(np.max(np.abs(e_lo)), np.max(np.abs(e_hi))))
