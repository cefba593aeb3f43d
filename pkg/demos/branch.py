"""Nontrivial solutions bifurcating from lambda* = 0.2 for G = -(u^4 + v^4)/4.

On the symmetric mode u = v = s sin x the equation reduces to
-s'' = 5 lambda s - s^3, so the branch opens to the right with amplitude
growing like sqrt(lambda - lambda*). The probe tracks it with Newton on a
finite-difference mesh and walks back toward the crossing.
"""
import math

from sflowkit import CoefficientPath
from sflowkit.probe import branch_probe, discretize, probe_both_sides

path = CoefficientPath.from_strings("5*lambda", "0", "5*lambda")
problem = discretize(path, "-(u^4+v^4)/4", m=200)
res = branch_probe(problem, 0.2, side="right")

print(f"discrete critical value {res.lambda_star_discrete:.10f}")
print(f"{'lambda':>14} {'amplitude':>12} {'amp/sqrt(d)':>12} iters")
for s in res.samples:
    d = s.lam - res.lambda_star_discrete
    print(f"{s.lam:14.10f} {s.amplitude:12.4e} {s.amplitude / math.sqrt(d):12.5f} {s.newton_iters:5d}")
print(f"confirmed: {res.success}")

sides = probe_both_sides(problem, 0.2)
print(f"left side: {'no branch' if sides['left'] is None else 'branch found'}")
