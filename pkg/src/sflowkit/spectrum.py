"""Dirichlet eigenvalues of -Laplace on intervals and rectangles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal


@dataclass(frozen=True)
class DomainSpec:
    """An interval (0, length) or a rectangle (0, a) x (0, b)."""

    kind: str
    length: float = math.pi
    sides: tuple = (1.0, 1.0)

    def __post_init__(self):
        if self.kind == "interval":
            if not self.length > 0:
                raise ValueError("interval length must be positive")
        elif self.kind == "rectangle":
            if len(self.sides) != 2 or not all(s > 0 for s in self.sides):
                raise ValueError("rectangle sides must be two positive numbers")
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def interval(cls, length=math.pi):
        return cls("interval", length=float(length))

    @classmethod
    def rectangle(cls, a, b):
        return cls("rectangle", sides=(float(a), float(b)))

    @property
    def is_interval(self):
        return self.kind == "interval"

    def spectrum(self, n=16):
        if self.is_interval:
            return interval_spectrum(self.length, n)
        return rectangle_spectrum(self.sides[0], self.sides[1], n)

    def to_dict(self):
        if self.is_interval:
            return {"type": "interval", "length": self.length}
        return {"type": "rectangle", "sides": list(self.sides)}


class Spectrum:
    """Nondecreasing Dirichlet eigenvalues, extended on demand.

    Indexing is 0-based over the materialized values; ``eigenvalue(k)`` is
    1-based as in the usual lambda_k notation.
    """

    def __init__(self, values, generator=None):
        self._values = np.asarray(values, dtype=float)
        self._generator = generator

    def __len__(self):
        return len(self._values)

    def __getitem__(self, i):
        return self._values[i]

    def __iter__(self):
        return iter(self._values)

    def __repr__(self):
        return f"Spectrum({self._values.tolist()!r})"

    @property
    def values(self):
        return self._values.copy()

    @property
    def extendable(self):
        return self._generator is not None

    def first(self, n):
        if n > len(self._values):
            if self._generator is None:
                raise IndexError(f"spectrum holds only {len(self._values)} values")
            self._values = np.asarray(self._generator(max(n, 2 * len(self._values))), dtype=float)
        return self._values[:n].copy()

    def eigenvalue(self, k):
        return float(self.first(k)[k - 1])

    def up_to(self, bound):
        """All eigenvalues <= bound (extending as needed)."""
        n = max(len(self._values), 1)
        while True:
            vals = self.first(n)
            if vals[-1] > bound:
                return vals[vals <= bound]
            n *= 2

    def count(self, bound, strict=False):
        """Number of eigenvalues < bound (strict) or <= bound."""
        vals = self.up_to(bound)
        if strict:
            return int(np.count_nonzero(vals < bound))
        return int(len(vals))


def interval_spectrum(L, n):
    """(k pi / L)^2 for k = 1..n."""
    if not L > 0:
        raise ValueError("length must be positive")

    def gen(m):
        k = np.arange(1, m + 1, dtype=float)
        return (k * math.pi / L) ** 2

    return Spectrum(gen(n), gen)


def rectangle_modes(a, b, n):
    """First n (value, m, p) triples of pi^2 (m^2/a^2 + p^2/b^2), sorted.

    Ties are ordered (m, p)-lexicographically.
    """
    if not (a > 0 and b > 0):
        raise ValueError("sides must be positive")
    if n <= 0:
        return []
    # start with an M that already holds n candidates, grow until complete
    M = max(2, int(math.ceil(math.sqrt(n))) + 1)
    while True:
        modes = sorted(
            (math.pi**2 * (m * m / a**2 + p * p / b**2), m, p)
            for m in range(1, M + 1)
            for p in range(1, M + 1)
        )[:n]
        cut = modes[-1][0]
        bound = int(math.ceil(math.sqrt(cut) * max(a, b) / math.pi)) + 1
        if bound <= M:
            return modes
        M = bound


def rectangle_spectrum(a, b, n):
    def gen(m):
        return [v for v, _, _ in rectangle_modes(a, b, m)]

    return Spectrum(gen(n), gen)


def fd_spectrum_interval(L, mesh, n):
    """Smallest n eigenvalues of the 3-point FD Dirichlet Laplacian.

    `mesh` is the number of subintervals; the matrix acts on mesh-1 interior nodes.
    """
    if n == 0:
        return Spectrum([])
    if mesh < 4 * n:
        raise ValueError("mesh must be at least 4*n")
    h = L / mesh
    m = mesh - 1
    diag = np.full(m, 2.0 / h**2)
    off = np.full(m - 1, -1.0 / h**2)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, n - 1))
    return Spectrum(np.sort(vals))


def fd_closed_form(L, mesh, n):
    """4/h^2 sin^2(k pi h / (2L)), the exact FD eigenvalues."""
    h = L / mesh
    k = np.arange(1, n + 1)
    return 4.0 / h**2 * np.sin(k * math.pi * h / (2 * L)) ** 2
