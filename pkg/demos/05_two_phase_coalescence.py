"""
Two-phase coupling to a uniform chain
=====================================

Phase one runs the proportional coupling until the squared coordinates are
within ``n^-a`` in l1. Phase two runs the non-Markovian coupling over a
window long enough that the backward partition merges into one block; if
every merge coupling succeeds, the chains meet at the end of the window.
The second chain starts uniform, so meeting bounds the distance to
stationarity.
"""

from kacwalk import RngStream, SphereState
from kacwalk.coupling import CouplingTuning, two_phase_coupling
from kacwalk.experiments import ExperimentConfig, run_experiment

tuning = CouplingTuning.desk()
print("desk tuning:", tuning.to_dict())

out = two_phase_coupling(SphereState.basis(10), 10, 852, 968, tuning, RngStream(5))
print("coalesced:", out.coalesced, "tau:", out.tau, "merges:", len(out.merge_success))

rec = run_experiment(ExperimentConfig(kind="coalesce", n=10, replicas=300))
for r in rec.rows:
    print(f"{r['statistic']:22s} {r['estimate']}")
