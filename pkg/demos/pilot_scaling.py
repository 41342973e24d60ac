"""
Pilot run for the coupling-time scaling check
=============================================

Median two-phase coupling time, with phase one stopped as soon as the
chains are close, regressed on ``n log n`` in log-log scale. The ratio
``tau / (n log n)`` is still increasing over small ``n`` (the typical
contraction rate per step approaches its limit from above), so the local
slope sits above one and falls as the grid moves to larger ``n``.

Run: ``python demos/pilot_scaling.py [replicas]``; about a minute at 100.
"""

import math
import sys

from kacwalk.experiments import ExperimentConfig, run_experiment

replicas = int(sys.argv[1]) if len(sys.argv) > 1 else 100


def pilot(grid, a):
    rec = run_experiment(ExperimentConfig(kind="coalesce", n_grid=grid, replicas=replicas,
                                          a=a, stop_early=True, start="random", seed=2024))
    med = {r["n"]: r["estimate"] for r in rec.rows if r["statistic"] == "median_tau"}
    slope = next(r["estimate"] for r in rec.rows if r["statistic"] == "tau_scaling_slope")
    return med, slope


for a in (2.0, 4.0, 8.0):
    med, slope = pilot([8, 12, 16, 24, 32], a)
    ratios = {n: round(m / (n * math.log(n)), 1) for n, m in med.items()}
    print(f"a={a}: slope {slope:.3f}  tau/(n log n) {ratios}")

med, slope = pilot([16, 32, 64], 8.0)
print(f"a=8, n in 16..64: slope {slope:.3f}")
