"""
Maximal coupling of arcsine statistics
======================================

At a merge time the block mass after the update is ``A + B cos^2``, an
arcsine law on ``(A, A + B)``. The two chains draw their angles from a
maximal coupling of the two such laws, so they agree on the block mass
with the largest possible probability, the overlap of the two densities.
"""

from kacwalk import RngStream
from kacwalk.coupling import ArcsineParams, arcsine_overlap, maximal_arcsine_coupling_batch

cases = {
    "same law": ArcsineParams(0.2, 0.3, 0.2, 0.3),
    "tiny shift": ArcsineParams(0.2, 0.3, 0.2001, 0.2999),
    "nested": ArcsineParams(0.1, 0.6, 0.3, 0.2),
    "disjoint": ArcsineParams(0.0, 0.2, 0.5, 0.3),
}
for name, p in cases.items():
    th, th2, ok = maximal_arcsine_coupling_batch(p, 100_000, RngStream(4))
    print(f"{name:10s}  overlap {arcsine_overlap(p):.4f}  observed {ok.mean():.4f}")
