"""Block statistics fed to the maximal coupling at a merge time."""

from __future__ import annotations

from ..errors import UsageError
from .arcsine import ArcsineParams
from .proportional import CoupledPair


def arcsine_block_params(pair: CoupledPair, block, i: int, j: int) -> ArcsineParams:
    """Offsets and amplitudes of the block-sum statistic at a merge.

    ``block`` holds 1-based coordinates and must contain ``i`` but not
    ``j``. ``A`` is the x-mass of ``block`` without ``i`` and ``B`` the
    x-mass of the pair; ``C``, ``D`` are the same for ``y``.
    """
    block = {int(r) for r in block}
    if i not in block:
        raise UsageError(f"i={i} is not in the block")
    if j in block:
        raise UsageError(f"j={j} must lie outside the block")
    n = pair.n
    if not (1 <= min(block) and max(block | {j}) <= n):
        raise UsageError(f"block or pair out of range for n={n}")
    a, b = pair.x.squares, pair.y.squares
    rest = [r - 1 for r in block if r != i]
    A = float(a[rest].sum())
    C = float(b[rest].sum())
    return ArcsineParams(A, float(a[i - 1] + a[j - 1]), C, float(b[i - 1] + b[j - 1]))
