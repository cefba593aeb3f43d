"""Comparison certificates and the Gamma lower bound on bifurcation counts.

The bounds alpha, beta are extreme eigenvalues of the NEGATED coefficient
matrix (see coefficients.form_bounds). The auxiliary constant paths are

    M: negated matrix (beta0 + lambda (alpha1 - beta0)) I,
    N: negated matrix (alpha0 + lambda (beta1 - alpha0)) I,

whose spectral flows are given by the counting formulas below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coefficients import CoefficientPath, form_bounds
from .errors import EndpointSingular, InvalidOrder, XDependentUnsupported
from .numerics import Numerics
from .spectrum import DomainSpec, interval_spectrum


@dataclass
class Certificate:
    verdict: str  # "bifurcation_exists" or "inconclusive"
    direction: str | None  # "positive" (i) or "negative" (ii)
    witnesses: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)

    @property
    def exists(self):
        return self.verdict == "bifurcation_exists"

    def to_dict(self):
        return {"verdict": self.verdict, "direction": self.direction,
                "witnesses": self.witnesses, "bounds": self.bounds}


@dataclass
class CountBound:
    gamma: int
    min_bifurcations: int
    case: str | None = None

    def to_dict(self):
        return {"gamma": self.gamma, "min_bifurcations": self.min_bifurcations, "case": self.case}


def _count_ge(spectrum, bound):
    """#{k : bound >= lambda_k}."""
    return spectrum.count(bound) if bound > 0 else 0


def _count_lt_neg(spectrum, bound):
    """#{k : bound < -lambda_k}."""
    return spectrum.count(-bound, strict=True) if bound < 0 else 0


def _half_signature_sum(s, spectrum):
    """1/2 sum_k sgn of the delta-shifted M-type block at endpoint value s."""
    if s >= 0:
        return _count_ge(spectrum, s)
    return -_count_lt_neg(spectrum, s)


def count_formula_M(alpha1, beta0, spectrum=None):
    spectrum = spectrum or interval_spectrum(math.pi, 16)
    return _half_signature_sum(alpha1, spectrum) - _half_signature_sum(beta0, spectrum)


def count_formula_N(beta1, alpha0, spectrum=None):
    spectrum = spectrum or interval_spectrum(math.pi, 16)
    return _half_signature_sum(beta1, spectrum) - _half_signature_sum(alpha0, spectrum)


def auxiliary_path_M(alpha1, beta0, lambda_range=(0.0, 1.0)):
    """Constant path whose negated coefficient matrix is (beta0 + lambda (alpha1 - beta0)) I."""
    alpha1, beta0 = float(alpha1), float(beta0)
    s = f"-(({beta0!r})+lambda*(({alpha1!r})-({beta0!r})))"
    return CoefficientPath.from_strings(s, "0", s, lambda_range=lambda_range)


def auxiliary_path_N(beta1, alpha0, lambda_range=(0.0, 1.0)):
    beta1, alpha0 = float(beta1), float(alpha0)
    s = f"-(({alpha0!r})+lambda*(({beta1!r})-({alpha0!r})))"
    return CoefficientPath.from_strings(s, "0", s, lambda_range=lambda_range)


def gamma_count(alpha, beta, spectrum=None):
    """Gamma(alpha, beta) for alpha > beta; lambda_k = k^2 unless a spectrum is given."""
    if not alpha > beta:
        raise InvalidOrder(f"Gamma needs alpha > beta, got alpha={alpha}, beta={beta}")
    spectrum = spectrum or interval_spectrum(math.pi, 16)
    if beta >= 0:
        vals = spectrum.up_to(alpha) if alpha > 0 else []
        return int(sum(1 for lk in vals if beta <= lk))
    if alpha >= 0:
        return _count_ge(spectrum, alpha) + _count_lt_neg(spectrum, beta)
    vals = spectrum.up_to(-beta)
    return int(sum(1 for lk in vals if beta < -lk < alpha))


def _span(domain):
    if domain.is_interval:
        return (0.0, domain.length)
    return (0.0, 1.0)


def endpoint_bounds(path, domain, numerics=None):
    num = numerics or Numerics()
    domain = domain or DomainSpec.interval()
    if path.x_dependent and not domain.is_interval:
        raise XDependentUnsupported("x-dependent coefficients are supported on intervals only")
    lo, hi = path.lambda_range
    b0 = form_bounds(path, lo, x_grid=num.x_grid, x_span=_span(domain))
    b1 = form_bounds(path, hi, x_grid=num.x_grid, x_span=_span(domain))
    return {"alpha0": b0.alpha, "beta0": b0.beta, "alpha1": b1.alpha, "beta1": b1.beta}


def check_endpoints(path, domain, numerics=None):
    """Raise EndpointSingular when the linearisation at either endpoint has a kernel."""
    num = numerics or Numerics()
    domain = domain or DomainSpec.interval()
    lo, hi = path.lambda_range
    if not path.x_dependent:
        from .index import singular_blocks
        spec = domain.spectrum()
        for lam in (lo, hi):
            bad = singular_blocks(path, lam, spec)
            if bad:
                raise EndpointSingular(f"linearisation singular at lambda = {lam} (modes {bad})")
        return
    if not domain.is_interval:
        raise XDependentUnsupported("x-dependent coefficients are supported on intervals only")
    from .ode import kernel
    for lam in (lo, hi):
        dim, _ = kernel(path, lam, numerics=num, length=domain.length, with_basis=False)
        if dim:
            raise EndpointSingular(f"linearisation singular at lambda = {lam} (kernel dim {dim})")


def _witnesses(lower, upper, lower_name, upper_name, spectrum):
    """k with lower < lambda_k < upper or lower < -lambda_k < upper."""
    out = []
    top = max(abs(lower), abs(upper))
    for k, lk in enumerate(spectrum.up_to(top), start=1):
        if lower < lk < upper:
            out.append({"k": k, "lambda_k": float(lk), "inequality": f"{lower_name} < lambda_k < {upper_name}"})
        elif lower < -lk < upper:
            out.append({"k": k, "lambda_k": float(lk), "inequality": f"{lower_name} < -lambda_k < {upper_name}"})
    return out


def certify_bifurcation(path, domain=None, numerics=None):
    domain = domain or DomainSpec.interval()
    bounds = endpoint_bounds(path, domain, numerics)
    check_endpoints(path, domain, numerics)
    spec = domain.spectrum()
    pos = _witnesses(bounds["beta0"], bounds["alpha1"], "beta0", "alpha1", spec)
    if pos:
        return Certificate("bifurcation_exists", "positive", pos, bounds)
    neg = _witnesses(bounds["beta1"], bounds["alpha0"], "beta1", "alpha0", spec)
    if neg:
        return Certificate("bifurcation_exists", "negative", neg, bounds)
    return Certificate("inconclusive", None, [], bounds)


def min_bifurcation_count(path, domain=None, numerics=None):
    """Gamma(alpha1, beta0) or Gamma(alpha0, beta1), and ceil(Gamma / 2)."""
    domain = domain or DomainSpec.interval()
    bounds = endpoint_bounds(path, domain, numerics)
    check_endpoints(path, domain, numerics)
    spec = domain.spectrum()
    a0, b0, a1, b1 = (bounds[k] for k in ("alpha0", "beta0", "alpha1", "beta1"))
    if a1 > b0:
        g, case = gamma_count(a1, b0, spec), "alpha1>beta0"
    elif a0 > b1:
        g, case = gamma_count(a0, b1, spec), "alpha0>beta1"
    else:
        g, case = 0, None
    return CountBound(g, (g + 1) // 2, case)
