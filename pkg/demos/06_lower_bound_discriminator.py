"""
Why the walk cannot mix before order n log n steps
==================================================

If some coordinate has never been touched, the walk still sits on the set
where that coordinate equals its starting value, which has measure zero
under the uniform law. The chance of an untouched coordinate after ``t``
steps is a coupon-collector quantity with an exact inclusion-exclusion
formula.
"""

import math

from kacwalk.experiments import ExperimentConfig, coverage_probability, run_experiment

n = 10
for factor in (0.2, 0.4, 1.0, 2.0):
    t = math.ceil(factor * n * math.log(n))
    print(f"t={t:3d} ({factor} n log n): P[untouched] = {1 - coverage_probability(n, t):.4f}")

rec = run_experiment(ExperimentConfig(kind="mixing", n=n, replicas=10_000, chunk_size=5000,
                                      t_grid=[10, 23, 46]))
for r in rec.rows:
    print(f"t={r['t']:3d} {r['statistic']:18s} {r['estimate']:.4f}")

# the untouched fraction only tends to one with n
for n in (10, 50, 200, 1000):
    t = math.ceil(0.4 * n * math.log(n))
    print(f"n={n:5d} T1={t:5d} P[untouched]={1 - coverage_probability(n, t):.4f}")
