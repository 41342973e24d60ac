import math

import numpy as np
import pytest

from kacwalk import RngStream, SphereState, UpdateTriple, UsageError, kac_step, sample_uniform_sphere
from kacwalk.coupling import (
    CoupledPair,
    contraction_factor,
    proportional_step,
    proportional_step_batch,
)
from kacwalk.walk import sample_pairs


def random_pair(n, seed):
    s = RngStream(seed)
    return CoupledPair(sample_uniform_sphere(n, s), sample_uniform_sphere(n, s))


def test_x_moves_like_the_walk():
    pair = random_pair(5, 1)
    u = UpdateTriple(2, 4, 0.77)
    out = proportional_step(pair, u, RngStream(0))
    assert np.array_equal(out.x.coords, kac_step(pair.x, u).coords)
    assert out.t == 1


def test_updated_pairs_share_ray_and_keep_y_mass():
    pair = random_pair(6, 2)
    out = proportional_step(pair, UpdateTriple(1, 3, 2.5), RngStream(0))
    xi, xj = out.x[0], out.x[2]
    yi, yj = out.y[0], out.y[2]
    assert math.isclose(xi * yj, xj * yi, abs_tol=1e-15)
    assert xi * yi >= 0 and xj * yj >= 0
    assert math.isclose(yi ** 2 + yj ** 2, pair.y[0] ** 2 + pair.y[2] ** 2, rel_tol=1e-12)
    keep = [1, 3, 4, 5]
    assert np.array_equal(out.y.coords[keep], pair.y.coords[keep])


def test_identical_chains_stay_identical():
    x = sample_uniform_sphere(4, RngStream(3))
    pair = CoupledPair(x, x)
    for k in range(50):
        u = UpdateTriple(1 + k % 3, 4, 0.1 * k)
        pair = proportional_step(pair, u, RngStream(0))
    assert np.array_equal(pair.x.coords, pair.y.coords)
    assert pair.sq_gap() == 0.0 and pair.l1_gap() == 0.0


def test_zero_x_pair_draws_an_angle():
    x = SphereState.basis(3, 3)
    y = SphereState(np.array([0.6, 0.0, 0.8]))
    out = proportional_step(CoupledPair(x, y), UpdateTriple(1, 2, 1.0), RngStream(5))
    assert math.isclose(out.y[0] ** 2 + out.y[1] ** 2, 0.36, rel_tol=1e-12)


def test_n2_meets_in_one_step():
    pair = random_pair(2, 6)
    out = proportional_step(pair, UpdateTriple(1, 2, 0.3), RngStream(0))
    np.testing.assert_allclose(out.x.coords, out.y.coords, atol=1e-15)


def test_dimension_mismatch():
    with pytest.raises(UsageError):
        CoupledPair(SphereState.basis(2), SphereState.basis(3))
    with pytest.raises(UsageError):
        proportional_step(random_pair(3, 0), UpdateTriple(1, 4, 0.0), RngStream(0))


def test_batch_equals_scalar():
    n, m = 5, 40
    s = RngStream(8)
    x = sample_uniform_sphere(n, s, size=m)
    y = sample_uniform_sphere(n, s, size=m)
    gen = s.gen
    i, j = sample_pairs(n, m, gen)
    th = 2 * math.pi * gen.random(m)
    xb, yb = x.copy(), y.copy()
    proportional_step_batch(xb, yb, i, j, th, gen)
    for r in range(m):
        out = proportional_step(CoupledPair(x[r], y[r]),
                                UpdateTriple(int(i[r]) + 1, int(j[r]) + 1, float(th[r])),
                                RngStream(0))
        np.testing.assert_allclose(xb[r], out.x.coords, atol=1e-14)
        np.testing.assert_allclose(yb[r], out.y.coords, atol=1e-14)


def test_contraction_factor_values():
    assert contraction_factor(3) == pytest.approx(7 / 12)
    assert contraction_factor(4) == pytest.approx(0.75)
