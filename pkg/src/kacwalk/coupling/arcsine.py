"""Maximal coupling of two shifted arcsine statistics.

For ``theta`` uniform, ``S = A + B cos(theta)^2`` has the arcsine law on
``(A, A + B)`` with density ``1 / (pi sqrt((x - A)(A + B - x)))``. The
coupling below is the gamma-coupling: draw ``S`` from its law and keep it
for the second chain with probability ``min(1, g(S) / f(S))``; otherwise
draw the second value from the normalised residual ``(g - f)+`` by
rejection. This attains ``P[S = S'] = integral of min(f, g)``. The two
quadrant signs of ``theta`` are shared by both angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import DegenerateInputError, UsageError
from ..rng import as_generator
from ..walk import NORM_TOL, TWO_PI

_SCALAR_TRIES = 64
_BATCH = 4096


@dataclass(frozen=True)
class ArcsineParams:
    """Offsets and amplitudes of ``S = A + B cos^2`` and ``S' = C + D cos^2``."""

    A: float
    B: float
    C: float
    D: float

    def __post_init__(self):
        for name in "ABCD":
            v = float(getattr(self, name))
            if not -NORM_TOL <= v <= 1.0 + NORM_TOL:
                raise UsageError(f"{name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)
        if self.A + self.B > 1.0 + NORM_TOL or self.C + self.D > 1.0 + NORM_TOL:
            raise UsageError("offset plus amplitude exceeds 1")


def arcsine_pdf(x, offset, amplitude):
    """Density of ``offset + amplitude * cos(theta)^2``; zero off the support."""
    x = np.asarray(x, dtype=np.float64)
    q = (x - offset) * (offset + amplitude - x)
    out = np.zeros_like(q)
    pos = q > 0.0
    out[pos] = 1.0 / (math.pi * np.sqrt(q[pos]))
    return out if out.ndim else float(out)


def arcsine_cdf(x, offset, amplitude):
    """``(2/pi) asin(sqrt((x - A)/B))``, via atan2 so both edges stay exact."""
    x = np.asarray(x, dtype=np.float64)
    lo = np.maximum(x - offset, 0.0)
    hi = np.maximum(offset + amplitude - x, 0.0)
    out = (2.0 / math.pi) * np.arctan2(np.sqrt(lo), np.sqrt(hi))
    return out if out.ndim else float(out)


def arcsine_overlap(params: ArcsineParams) -> float:
    """Closed-form ``integral of min(f, g)``, the best achievable P[S = S'].

    On the common support, ``f < g`` exactly where
    ``(x-A)(A+B-x) > (x-C)(C+D-x)``; the difference is linear in ``x``, so
    there is at most one crossing and each piece integrates by CDFs.
    """
    A, B, C, D = params.A, params.B, params.C, params.D
    lo, hi = max(A, C), min(A + B, C + D)
    if not lo < hi:
        return 0.0
    def gap(x):
        return (x - A) * (A + B - x) - (x - C) * (C + D - x)

    # interpolate the linear gap from its end values; solving alpha x + beta = 0
    # directly cancels badly when the crossing sits at an endpoint
    g_lo, g_hi = gap(lo), gap(hi)
    cuts = [lo, hi]
    if g_lo * g_hi < 0.0:
        xc = lo + (hi - lo) * g_lo / (g_lo - g_hi)
        if lo < xc < hi:
            cuts = [lo, xc, hi]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        f_smaller = (mid - A) * (A + B - mid) >= (mid - C) * (C + D - mid)
        off, amp = (A, B) if f_smaller else (C, D)
        total += float(arcsine_cdf(b, off, amp) - arcsine_cdf(a, off, amp))
    return min(1.0, total)


def _pdf1(x, offset, amplitude):
    q = (x - offset) * (offset + amplitude - x)
    return 1.0 / (math.pi * math.sqrt(q)) if q > 0.0 else 0.0


def _draw_u(gen):
    """cos^2 of a uniform angle, with the angle; endpoints are redrawn."""
    while True:
        psi = TWO_PI * gen.random()
        c = math.cos(psi)
        u = c * c
        if 0.0 < u < 1.0:
            return psi, u


def _residual_u(A, B, C, D, gen):
    """cos^2 value for S' drawn from the residual (g - f)+, normalised."""
    for _ in range(_SCALAR_TRIES):
        _, u2 = _draw_u(gen)
        g = 1.0 / (math.pi * D * math.sqrt(u2 * (1.0 - u2)))
        if gen.random() * g > _pdf1(C + D * u2, A, B):
            return u2
    while True:
        c = np.cos(TWO_PI * gen.random(_BATCH))
        u2 = c * c
        ok = (u2 > 0.0) & (u2 < 1.0)
        u2 = u2[ok]
        g = 1.0 / (math.pi * D * np.sqrt(u2 * (1.0 - u2)))
        v = gen.random(u2.size) * g
        f = arcsine_pdf(C + D * u2, A, B)
        hit = np.flatnonzero(v > f)
        if hit.size:
            return float(u2[hit[0]])


class CoupledDraw(NamedTuple):
    """Angles ``theta``, ``theta_prime`` and whether ``S == S'``."""

    theta: float
    theta_prime: float
    success: bool


def coupled_cos2(A, B, C, D, gen):
    """Core draw on raw floats.

    Returns ``(u, u_prime, sign_cos, sign_sin, success)`` where ``u`` and
    ``u_prime`` are ``cos^2`` of the two angles; on success
    ``C + D * u_prime`` reproduces ``A + B * u`` up to one rounding.
    """
    psi, u = _draw_u(gen)
    sc = 1.0 if math.cos(psi) >= 0.0 else -1.0
    ss = 1.0 if math.sin(psi) >= 0.0 else -1.0
    s = A + B * u
    f = 1.0 / (math.pi * B * math.sqrt(u * (1.0 - u)))
    if gen.random() * f <= _pdf1(s, C, D):
        u2 = min(1.0, max(0.0, (s - C) / D))
        return u, u2, sc, ss, True
    return u, _residual_u(A, B, C, D, gen), sc, ss, False


def _angle(u, sc, ss):
    th = math.atan2(ss * math.sqrt(max(0.0, 1.0 - u)), sc * math.sqrt(u))
    return th + TWO_PI if th < 0.0 else th


def maximal_arcsine_coupling(params: ArcsineParams, rng) -> CoupledDraw:
    """Draw ``(theta, theta', success)`` from the maximal coupling.

    Each angle is marginally uniform on [0, 2*pi); ``cos`` and ``sin`` of
    the two angles share signs. Requires ``B > 0`` and ``D > 0``.
    """
    A, B, C, D = params.A, params.B, params.C, params.D
    if not (B > 0.0 and D > 0.0):
        raise DegenerateInputError(f"amplitudes must be positive, got B={B}, D={D}")
    u, u2, sc, ss, ok = coupled_cos2(A, B, C, D, as_generator(rng))
    return CoupledDraw(_angle(u, sc, ss), _angle(u2, sc, ss), ok)


def maximal_arcsine_coupling_batch(params: ArcsineParams, size: int, rng):
    """Vectorised draws from the same coupling.

    Returns arrays ``(theta, theta_prime, success)`` of length ``size``.
    """
    A, B, C, D = params.A, params.B, params.C, params.D
    if not (B > 0.0 and D > 0.0):
        raise DegenerateInputError(f"amplitudes must be positive, got B={B}, D={D}")
    gen = as_generator(rng)
    psi = TWO_PI * gen.random(size)
    c = np.cos(psi)
    u = c * c
    bad = ~((u > 0.0) & (u < 1.0))
    while bad.any():
        psi[bad] = TWO_PI * gen.random(int(bad.sum()))
        c = np.cos(psi)
        u = c * c
        bad = ~((u > 0.0) & (u < 1.0))
    sc = np.where(np.cos(psi) >= 0.0, 1.0, -1.0)
    ss = np.where(np.sin(psi) >= 0.0, 1.0, -1.0)
    s = A + B * u
    f = 1.0 / (math.pi * B * np.sqrt(u * (1.0 - u)))
    success = gen.random(size) * f <= arcsine_pdf(s, C, D)
    u2 = np.clip((s - C) / D, 0.0, 1.0)
    todo = np.flatnonzero(~success)
    while todo.size:
        c2 = np.cos(TWO_PI * gen.random(todo.size))
        w = c2 * c2
        valid = (w > 0.0) & (w < 1.0)
        g = np.full(todo.size, np.inf)
        g[valid] = 1.0 / (math.pi * D * np.sqrt(w[valid] * (1.0 - w[valid])))
        v = gen.random(todo.size) * g
        accept = valid & (v > arcsine_pdf(C + D * w, A, B))
        u2[todo[accept]] = w[accept]
        todo = todo[~accept]
    theta = np.mod(np.arctan2(ss * np.sqrt(1.0 - u), sc * np.sqrt(u)), TWO_PI)
    theta_p = np.mod(np.arctan2(ss * np.sqrt(1.0 - u2), sc * np.sqrt(u2)), TWO_PI)
    return theta, theta_p, success
