"""Kac's walk on the unit sphere S^{n-1}.

One step picks a uniformly random coordinate pair ``i < j`` and a uniform
angle, and rotates the ``(x[i], x[j])`` plane by that angle. Indices are
1-based at the public API (:class:`UpdateTriple`) and 0-based in arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .rng import as_generator

TWO_PI = 2.0 * math.pi
NORM_TOL = 1e-9
RENORM_EVERY = 10_000


@dataclass(frozen=True)
class SphereState:
    """A point on S^{n-1}.

    ``coords`` is stored as a read-only float64 array. Construction checks
    ``|sum(coords**2) - 1| <= NORM_TOL``.
    """

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.float64)
        if c.ndim != 1 or c.size < 2:
            raise UsageError(f"SphereState needs a 1-d vector with n >= 2, got shape {c.shape}")
        err = abs(float(c @ c) - 1.0)
        if not err <= NORM_TOL:
            raise UsageError(f"coordinates are off the unit sphere by {err:.3g}")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.size

    @property
    def squares(self) -> np.ndarray:
        """The squared-coordinate vector x[i]**2."""
        return self.coords * self.coords

    def __len__(self):
        return self.n

    def __getitem__(self, k):
        return self.coords[k]

    @classmethod
    def basis(cls, n: int, k: int = 1) -> "SphereState":
        """The standard basis vector e_k (1-based)."""
        if not 1 <= k <= n:
            raise UsageError(f"basis index {k} out of range for n={n}")
        e = np.zeros(n)
        e[k - 1] = 1.0
        return cls(e)


@dataclass(frozen=True)
class UpdateTriple:
    """Randomness for one step: coordinates ``1 <= i < j <= n`` and an angle.

    ``theta`` is reduced into [0, 2*pi) on construction.
    """

    i: int
    j: int
    theta: float

    def __post_init__(self):
        i, j = int(self.i), int(self.j)
        if not 1 <= i < j:
            raise UsageError(f"need 1 <= i < j, got (i, j) = ({i}, {j})")
        theta = math.fmod(float(self.theta), TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "theta", theta)


def _coords(state) -> np.ndarray:
    if isinstance(state, SphereState):
        return state.coords
    return np.asarray(state, dtype=np.float64)


def kac_step(state: SphereState, u: UpdateTriple) -> SphereState:
    """Apply the rotation ``F(i, j, theta, x)``.

    Coordinates other than ``i`` and ``j`` are copied bit for bit.
    """
    x = _coords(state)
    n = x.size
    if u.j > n:
        raise UsageError(f"update pair ({u.i}, {u.j}) out of range for n={n}")
    i, j = u.i - 1, u.j - 1
    c, s = math.cos(u.theta), math.sin(u.theta)
    out = x.copy()
    xi, xj = x[i], x[j]
    out[i] = c * xi - s * xj
    out[j] = s * xi + c * xj
    return SphereState(out)


def sample_pairs(n: int, size, gen: np.random.Generator):
    """Vectorised uniform unordered pairs, 0-based, with ``i < j``."""
    a = gen.integers(0, n, size=size)
    b = gen.integers(0, n - 1, size=size)
    b = b + (b >= a)
    return np.minimum(a, b), np.maximum(a, b)


def sample_update(n: int, rng) -> UpdateTriple:
    """Draw ``(i, j, theta)`` uniformly: pair over all n(n-1)/2 pairs, angle on [0, 2*pi)."""
    if n < 2:
        raise UsageError(f"dimension must be at least 2, got n={n}")
    gen = as_generator(rng)
    i, j = sample_pairs(n, None, gen)
    theta = TWO_PI * gen.random()
    return UpdateTriple(int(i) + 1, int(j) + 1, theta)


def renormalize(state) -> SphereState:
    """Scale ``state`` back onto the unit sphere."""
    x = _coords(state)
    sq = float(x @ x)
    if not sq > 0.0:
        raise FloatingPointError("cannot renormalize the zero vector")
    return SphereState(x / math.sqrt(sq))


def _rotate_rows(x, rows, i, j, c, s):
    xi = x[rows, i]
    xj = x[rows, j]
    x[rows, i] = c * xi - s * xj
    x[rows, j] = s * xi + c * xj


def run_walk(initial: SphereState, steps: int, rng) -> SphereState:
    """Run ``steps`` Kac steps from ``initial``.

    Renormalises every ``RENORM_EVERY`` steps to stop rounding drift.
    """
    if steps < 0:
        raise UsageError(f"steps must be non-negative, got {steps}")
    x = np.array(_coords(initial), dtype=np.float64)
    if steps == 0:
        return initial if isinstance(initial, SphereState) else SphereState(x)
    gen = as_generator(rng)
    n = x.size
    done = 0
    while done < steps:
        m = min(RENORM_EVERY, steps - done)
        ii, jj = sample_pairs(n, m, gen)
        th = TWO_PI * gen.random(m)
        cs, sn = np.cos(th), np.sin(th)
        for i, j, c, s in zip(ii.tolist(), jj.tolist(), cs.tolist(), sn.tolist()):
            xi, xj = x[i], x[j]
            x[i] = c * xi - s * xj
            x[j] = s * xi + c * xj
        x /= math.sqrt(float(x @ x))
        done += m
    return SphereState(x)


def run_walk_batch(x0, steps: int, rng, replicas: int | None = None, record_at=None):
    """Run independent walks in lockstep, one row per replica.

    Parameters
    ----------
    x0 : SphereState or array of shape (n,) or (R, n)
        Start point(s). A single point is broadcast to ``replicas`` rows.
    steps : int
        Number of steps.
    rng : RngStream or Generator
    replicas : int, optional
        Row count when ``x0`` is a single point.
    record_at : iterable of int, optional
        Times at which to keep a copy of the batch.

    Returns
    -------
    ndarray of shape (R, n), or dict mapping each recorded time to a copy
    when ``record_at`` is given.
    """
    x = np.array(_coords(x0), dtype=np.float64)
    if x.ndim == 1:
        if replicas is None:
            raise UsageError("replicas is required when x0 is a single point")
        x = np.tile(x, (replicas, 1))
    r, n = x.shape
    gen = as_generator(rng)
    rows = np.arange(r)
    marks = sorted(set(int(t) for t in record_at)) if record_at is not None else []
    if marks and (marks[0] < 0 or marks[-1] > steps):
        raise UsageError("record_at times must lie in [0, steps]")
    saved = {}
    for t in range(steps + 1):
        if marks and t == marks[0]:
            saved[t] = x.copy()
            marks.pop(0)
        if t == steps:
            break
        i, j = sample_pairs(n, r, gen)
        th = TWO_PI * gen.random(r)
        _rotate_rows(x, rows, i, j, np.cos(th), np.sin(th))
        if (t + 1) % RENORM_EVERY == 0:
            x /= np.sqrt(np.einsum("ij,ij->i", x, x))[:, None]
    if record_at is not None:
        return saved
    return x


def sample_uniform_sphere(n: int, rng, size: int | None = None):
    """Haar-distributed point(s): normalised i.i.d. standard normals.

    Returns a :class:`SphereState`, or an ``(size, n)`` array when ``size``
    is given.
    """
    if n < 2:
        raise UsageError(f"dimension must be at least 2, got n={n}")
    gen = as_generator(rng)
    if size is None:
        while True:
            z = gen.standard_normal(n)
            sq = float(z @ z)
            if sq > 0.0:
                return SphereState(z / math.sqrt(sq))
    z = gen.standard_normal((size, n))
    sq = np.einsum("ij,ij->i", z, z)
    bad = ~(sq > 0.0)
    while bad.any():
        z[bad] = gen.standard_normal((int(bad.sum()), n))
        sq = np.einsum("ij,ij->i", z, z)
        bad = ~(sq > 0.0)
    return z / np.sqrt(sq)[:, None]
