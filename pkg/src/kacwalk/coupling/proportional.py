"""One-step proportional coupling of two Kac walks.

Both chains update the same coordinate pair. After ``x`` is rotated, ``y``'s
pair is placed on the same ray from the origin at its own radius, so the
updated pairs are collinear with the origin and agree in sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UsageError
from ..rng import as_generator
from ..walk import TWO_PI, SphereState, UpdateTriple


@dataclass(frozen=True)
class CoupledPair:
    """Two chain states at a common time ``t``."""

    x: SphereState
    y: SphereState
    t: int = 0

    def __post_init__(self):
        if not isinstance(self.x, SphereState):
            object.__setattr__(self, "x", SphereState(self.x))
        if not isinstance(self.y, SphereState):
            object.__setattr__(self, "y", SphereState(self.y))
        if self.x.n != self.y.n:
            raise UsageError(f"dimension mismatch: {self.x.n} vs {self.y.n}")

    @property
    def n(self) -> int:
        return self.x.n

    def sq_gap(self) -> float:
        """sum_k (x[k]^2 - y[k]^2)^2."""
        d = self.x.squares - self.y.squares
        return float(d @ d)

    def l1_gap(self) -> float:
        """sum_k |x[k]^2 - y[k]^2|."""
        return float(np.abs(self.x.squares - self.y.squares).sum())


def proportional_update(x, y, i, j, theta, gen):
    """In-place proportional step on raw 0-based arrays."""
    xi, xj = x[i], x[j]
    yi, yj = y[i], y[j]
    c, s = math.cos(theta), math.sin(theta)
    x[i] = c * xi - s * xj
    x[j] = s * xi + c * xj
    rx = math.hypot(xi, xj)
    ry = math.hypot(yi, yj)
    if rx == ry:
        # equal pair masses: y's pair is x's pair exactly
        y[i] = x[i]
        y[j] = x[j]
    elif rx > 0.0:
        # unit direction first, so a tiny rx cannot overflow the ratio
        y[i] = ry * (x[i] / rx)
        y[j] = ry * (x[j] / rx)
    else:
        # every angle is consistent with a zero x-pair
        phi = TWO_PI * gen.random()
        y[i] = ry * math.cos(phi)
        y[j] = ry * math.sin(phi)


def proportional_step(pair: CoupledPair, u: UpdateTriple, rng) -> CoupledPair:
    """Advance both chains one step under the proportional coupling.

    ``x`` moves exactly as ``kac_step(x, u)``; ``y`` uses the same pair and
    lands on the polar angle of the new ``(x[i], x[j])`` at its own radius.
    ``rng`` is only consumed when the x-pair is zero.
    """
    n = pair.n
    if u.j > n:
        raise UsageError(f"update pair ({u.i}, {u.j}) out of range for n={n}")
    x = np.array(pair.x.coords)
    y = np.array(pair.y.coords)
    proportional_update(x, y, u.i - 1, u.j - 1, u.theta, _LazyGen(rng))
    return CoupledPair(SphereState(x), SphereState(y), pair.t + 1)


class _LazyGen:
    def __init__(self, rng):
        self._rng = rng

    def random(self, *args):
        return as_generator(self._rng).random(*args)


def proportional_step_batch(x, y, i, j, theta, gen):
    """Vectorised proportional step on ``(R, n)`` arrays, in place.

    ``i``, ``j`` are 0-based index arrays of length R and ``theta`` the
    x-chain angles.
    """
    rows = np.arange(x.shape[0])
    xi, xj = x[rows, i], x[rows, j]
    yi, yj = y[rows, i], y[rows, j]
    c, s = np.cos(theta), np.sin(theta)
    nxi = c * xi - s * xj
    nxj = s * xi + c * xj
    x[rows, i] = nxi
    x[rows, j] = nxj
    rx = np.hypot(xi, xj)
    ry = np.hypot(yi, yj)
    same = rx == ry
    zero = (rx == 0.0) & ~same
    safe = np.where(rx == 0.0, 1.0, rx)
    ny_i = np.where(same, nxi, ry * (nxi / safe))
    ny_j = np.where(same, nxj, ry * (nxj / safe))
    if zero.any():
        k = int(zero.sum())
        phi = TWO_PI * gen.random(k)
        ny_i[zero] = ry[zero] * np.cos(phi)
        ny_j[zero] = ry[zero] * np.sin(phi)
    y[rows, i] = ny_i
    y[rows, j] = ny_j


def contraction_factor(n: int) -> float:
    """Exact one-step factor 1 - 1/(2n) - 3/(2n(n-1)) of E[sum (A-B)^2]."""
    return 1.0 - 1.0 / (2 * n) - 3.0 / (2 * n * (n - 1))
