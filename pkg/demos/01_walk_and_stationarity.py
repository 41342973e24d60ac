"""
Kac's walk and its approach to the uniform law
==============================================

Each step rotates a random coordinate plane by a uniform angle. Started at
``e1`` the walk is a point mass; the squared first coordinate of a uniform
point on S^{n-1} is Beta(1/2, (n-1)/2), so the KS distance to that law
tracks how far the walk still is from stationarity.
"""

import math

import numpy as np

from kacwalk import RngStream, SphereState, kac_step, run_walk_batch, UpdateTriple
from kacwalk.stats import beta_marginal, ks_critical_value, ks_distance

# a single step, by hand
x = SphereState.basis(4, 1)
print(kac_step(x, UpdateTriple(1, 3, math.pi / 3)).coords)

# a batch of walks from e1, recorded along a time grid
n, replicas = 10, 10_000
grid = [0, 10, 25, 50, 100, 250, math.ceil(200 * n * math.log(n))]
snaps = run_walk_batch(SphereState.basis(n), grid[-1], RngStream(1), replicas=replicas,
                       record_at=grid)
law = beta_marginal(n)
crit = ks_critical_value(replicas, 1e-3)
for t in grid:
    d = ks_distance(snaps[t][:, 0] ** 2, law.cdf)
    print(f"t={t:5d}  KS={d:.4f}  {'below' if d < crit else 'above'} critical {crit:.4f}")

# every coordinate has the same mean square once mixed
print("mean squares:", np.round((snaps[grid[-1]] ** 2).mean(axis=0), 3))
