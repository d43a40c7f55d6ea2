"""
Testing one sample
==================

A Pareto sample should be retained and a shifted Weibull sample of the same
size rejected. Observations must already be divided by the known scale, so
that they live on [1, inf).
"""

import numpy as np

from paretogof.distributions import ShiftedWeibull, pareto_sample
from paretogof.montecarlo import SimulationConfig, run_test

rng = np.random.default_rng(5)
cfg = SimulationConfig(reps=10_000, seed=1)

samples = {
    "Pareto(2)": pareto_sample(2.0, 50, rng),
    "1 + Weibull(2)": ShiftedWeibull(2.0).sample(50, rng),
}

for name, s in samples.items():
    for stat in ("tn", "vn", "ks", "cvm"):
        out = run_test(s, stat, 0.05, cfg)
        verdict = "reject" if out.reject else "retain"
        print(f"{name:>15}  {out.label:>4} = {out.value:8.4f}   p = {out.p_value:.4f}   {verdict}")
