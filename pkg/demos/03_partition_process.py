"""
The backward partition process
==============================

Reading a pair schedule from the end, each pair that joins two blocks is a
merge. The partition at the start is a single block exactly when the
scheduled pairs connect all coordinates, which happens with high
probability after about ``(1/2 + 2 eps) n log n`` steps.
"""

import math

from kacwalk import PairSchedule, RngStream, build_partitions, is_fully_merged
from kacwalk.experiments import ExperimentConfig, run_experiment

sched = PairSchedule(5, 0, ((1, 2), (3, 4), (2, 5), (1, 3), (4, 5)))
parts = build_partitions(sched)
for t in range(parts.t_end, parts.t0 - 1, -1):
    print(t, [sorted(b) for b in parts.blocks_at(t)])
print("merge times:", parts.merge_times, "fully merged:", is_fully_merged(parts))

sched = PairSchedule.sample(8, 40, RngStream(3))
print(build_partitions(sched).summary())

for eps in (0.25, 0.5, 1.0):
    m = math.ceil((0.5 + 2 * eps) * 100 * math.log(100))
    rec = run_experiment(ExperimentConfig(kind="partition", n=100, epsilon=eps,
                                          replicas=2000))
    r = rec.rows[0]
    print(f"eps={eps}: m={m} edges, connected {r['estimate']:.4f}, bound {r['bound']:.4f}")
