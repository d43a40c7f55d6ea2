"""
Asymptotic variance and local efficiency
========================================

Everything here is quadrature. The projections of the two kernels give the
limiting variances; a perturbation direction h gives the local slope of each
statistic and the Kullback-Leibler curvature, whose ratio is the local
Bahadur efficiency.
"""

import math

from paretogof import asymptotics as asy
from paretogof.distributions import LogLinearExponent, LogWeibull, ParetoMixture

print("Var upsilon(X)       =", asy.sigma2_T(1.0), " (5/972 =", 5 / 972, ")")
t0, vmax = asy.sigma2_V_max(1.0)
print("argmax Var psi(X; t) =", t0, " (sqrt 7 - 1 =", math.sqrt(7) - 1, ")")
print("max Var psi(X; t)    =", vmax)

for stat, fam in [
    ("tn", LogWeibull(1.0)),
    ("tn", LogLinearExponent(1.0, 2.0)),
    ("tn", LogLinearExponent(1.0, 1.5)),
    ("vn", ParetoMixture(1.0, 2.0)),
]:
    r = asy.local_efficiency(stat, fam)
    print(f"{stat}  {r.family:<32} b'(0) = {r.b_prime0:.6f}  2K'' = {r.kl_curvature:.6f}  e = {r.efficiency:.5f}")

ratio, best = asy.maximize_mixture_efficiency(1.0)
print(f"best Pareto mixture for V_n: beta/alpha = {ratio:.4f}, efficiency {best:.5f}")

# Each statistic is fully efficient along its own locally optimal family.
for stat in ("tn", "vn"):
    print(stat, "optimal family efficiency:", asy.optimality_check(stat, 1.0, C=1.0, D=5.0))
