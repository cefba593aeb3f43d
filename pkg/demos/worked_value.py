"""Spectral flow of lambda*(5I) on (0, pi) computed three independent ways.

The blocks L^k = diag(-1 - 5 lambda/k^2, 1 - 5 lambda/k^2) lose their positive
eigenvalue at lambda = k^2/5, so inside [0, 1] the modes k = 1, 2 cross at
0.2 and 0.8, each contributing -1.
"""
import math

import numpy as np

from sflowkit import CoefficientPath, DomainSpec, index, sflow_galerkin
from sflowkit.ode import crossing_records, total_sflow_crossings

path = CoefficientPath.from_strings("5*lambda", "0", "5*lambda")
domain = DomainSpec.interval(math.pi)
spec = domain.spectrum()

print("mode blocks at lambda = 1:")
for k in (1, 2, 3):
    m = index.block(path, 1.0, k, spec).matrix
    print(f"  k={k}: diag({m.p:+.4f}, {m.r:+.4f})  signature {index.signature(m):+d}")

i0, i1 = index.index(path, 0.0, spec), index.index(path, 1.0, spec)
print(f"\ni(A_0) = {i0}, i(A_1) = {i1}, index formula sfl = {index.spectral_flow_constant(path, spec)}")

g = sflow_galerkin(path, domain)
print(f"Galerkin Morse difference: {g.value} (stable at n = {g.n_used})")
for row in g.history:
    print(f"  n={row['n']:4d}  value {row['value']:+d}  tail bound {row['tail_norm']:.2e}")

recs = crossing_records(path)
print("\nshooting crossings:")
for r in recs:
    print(f"  lambda0 = {r.lambda0:.12f}  dim {r.kernel_dim}  form {np.round(r.form, 6).tolist()}"
          f"  local sflow {r.local_sflow:+d}")
print(f"sum of local flows: {total_sflow_crossings(path, records=recs)}")
