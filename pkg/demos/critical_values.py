"""
Monte-Carlo critical values
===========================

The null law of T_n and V_n is free of the shape, so one simulation at
alpha = 1 serves every Pareto sample. Chunks of replications draw from
independent seed streams, so adding threads never changes a number.
"""

from paretogof.montecarlo import PAPER_LEVELS, SimulationConfig, critical_value_table

cfg = SimulationConfig(reps=10_000, seed=20160101, workers=2)

for stat in ("tn", "vn"):
    table = critical_value_table(stat, (10, 20, 30, 40, 50, 100), PAPER_LEVELS, cfg)
    print(table.to_text())
    worst = max(table.compare_paper(), key=lambda row: abs(row[-1]))
    print(f"largest deviation from the printed table: {worst[-1]:+.4f} at n={worst[0]}, level {worst[1]}\n")
