"""Bifurcation certificates and lower bounds from endpoint coefficient bounds.

For each path the endpoint bounds (alpha, beta) are compared with the
Dirichlet eigenvalues; a trapped eigenvalue certifies a bifurcation point and
the count Gamma gives at least ceil(Gamma / 2) of them. The actual crossings
are listed next to the bound.
"""
import math

from sflowkit import CoefficientPath, DomainSpec, certify_bifurcation, min_bifurcation_count
from sflowkit.ode import crossing_records

domain = DomainSpec.interval(math.pi)
paths = {
    "lambda*(5I)": ("5*lambda", "0", "5*lambda"),
    "lambda*(-10I)": ("-10*lambda", "0", "-10*lambda"),
    "mixed a=6, c=2": ("6*lambda", "0", "2*lambda"),
    "x-dependent": ("lambda*(4+cos(x))", "lambda*sin(x)", "lambda*(3+x/2)"),
    "zero": ("0", "0", "0"),
}

for name, coeffs in paths.items():
    path = CoefficientPath.from_strings(*coeffs)
    cert = certify_bifurcation(path, domain)
    cb = min_bifurcation_count(path, domain)
    b = cert.bounds
    print(f"{name}")
    print(f"  alpha0={b['alpha0']:+.3f} beta0={b['beta0']:+.3f} alpha1={b['alpha1']:+.3f} beta1={b['beta1']:+.3f}")
    print(f"  verdict {cert.verdict} ({cert.direction}), witnesses k = {[w['k'] for w in cert.witnesses]}")
    jumps = [round(r.lambda0, 6) for r in crossing_records(path) if r.local_sflow]
    print(f"  Gamma = {cb.gamma}, at least {cb.min_bifurcations}; crossings with nonzero flow: {jumps}\n")
