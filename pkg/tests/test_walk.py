import math

import numpy as np
import pytest
from scipy import stats

from kacwalk import (
    NORM_TOL,
    RngStream,
    SphereState,
    UpdateTriple,
    UsageError,
    kac_step,
    renormalize,
    run_walk,
    run_walk_batch,
    sample_uniform_sphere,
    sample_update,
)
from kacwalk.walk import sample_pairs


def test_sphere_state_rejects_off_sphere():
    with pytest.raises(UsageError):
        SphereState([1.0, 1.0])
    with pytest.raises(UsageError):
        SphereState([1.0])


def test_sphere_state_is_read_only():
    s = SphereState.basis(3, 2)
    assert s.coords.tolist() == [0.0, 1.0, 0.0]
    with pytest.raises(ValueError):
        s.coords[0] = 1.0


def test_update_triple_validation_and_reduction():
    with pytest.raises(UsageError):
        UpdateTriple(2, 1, 0.0)
    with pytest.raises(UsageError):
        UpdateTriple(0, 1, 0.0)
    u = UpdateTriple(1, 2, -0.5)
    assert 0.0 <= u.theta < 2 * math.pi
    assert math.isclose(u.theta, 2 * math.pi - 0.5)
    assert UpdateTriple(1, 2, 4 * math.pi).theta == 0.0


def test_quarter_turn_on_e1():
    out = kac_step(SphereState.basis(2, 1), UpdateTriple(1, 2, math.pi / 2))
    np.testing.assert_allclose(out.coords, [0.0, 1.0], atol=1e-15)


def test_step_leaves_other_coordinates_bitwise():
    x = sample_uniform_sphere(6, RngStream(1))
    out = kac_step(x, UpdateTriple(2, 5, 1.234))
    keep = [0, 2, 3, 5]
    assert np.array_equal(out.coords[keep], x.coords[keep])
    assert math.isclose(out[1] ** 2 + out[4] ** 2, x[1] ** 2 + x[4] ** 2, rel_tol=1e-12)


def test_step_rejects_pair_out_of_range():
    with pytest.raises(UsageError):
        kac_step(SphereState.basis(3), UpdateTriple(1, 4, 0.1))


def test_sample_pairs_uniform():
    gen = RngStream(3).gen
    n = 5
    i, j = sample_pairs(n, 200_000, gen)
    assert np.all(i < j) and i.min() >= 0 and j.max() < n
    counts = np.bincount(i * n + j, minlength=n * n)
    counts = counts[counts > 0]
    assert counts.size == n * (n - 1) // 2
    assert stats.chisquare(counts).pvalue > 1e-4


def test_sample_update_is_one_based():
    u = sample_update(2, RngStream(0))
    assert (u.i, u.j) == (1, 2)
    with pytest.raises(UsageError):
        sample_update(1, RngStream(0))


def test_haar_marginal_matches_beta():
    y = sample_uniform_sphere(7, RngStream(5), size=20_000)
    np.testing.assert_allclose((y * y).sum(axis=1), 1.0, atol=1e-12)
    assert stats.kstest(y[:, 2] ** 2, stats.beta(0.5, 3.0).cdf).pvalue > 1e-4


def test_run_walk_determinism_and_norm():
    x0 = SphereState.basis(5)
    a = run_walk(x0, 25_000, RngStream(9))
    b = run_walk(x0, 25_000, RngStream(9))
    assert np.array_equal(a.coords, b.coords)
    assert abs(float(a.coords @ a.coords) - 1.0) <= NORM_TOL
    assert run_walk(x0, 0, RngStream(9)) is x0


def test_run_walk_matches_single_steps():
    # one block of presampled randomness equals the same draws applied one by one
    x0 = SphereState.basis(4)
    gen = RngStream(11).gen
    ii, jj = sample_pairs(4, 30, gen)
    th = 2 * math.pi * gen.random(30)
    x = x0
    for i, j, t in zip(ii, jj, th):
        x = kac_step(x, UpdateTriple(int(i) + 1, int(j) + 1, float(t)))
    np.testing.assert_allclose(run_walk(x0, 30, RngStream(11)).coords, x.coords, atol=1e-14)


def test_run_walk_batch_record_at():
    out = run_walk_batch(SphereState.basis(3), 5, RngStream(2), replicas=4, record_at=[0, 5])
    assert set(out) == {0, 5}
    assert np.array_equal(out[0], np.tile([1.0, 0.0, 0.0], (4, 1)))
    np.testing.assert_allclose((out[5] ** 2).sum(axis=1), 1.0, atol=1e-12)
    with pytest.raises(UsageError):
        run_walk_batch(SphereState.basis(3), 5, RngStream(2))
    with pytest.raises(UsageError):
        run_walk_batch(SphereState.basis(3), 5, RngStream(2), replicas=2, record_at=[6])


def test_renormalize():
    s = renormalize(np.array([3.0, 4.0]))
    np.testing.assert_allclose(s.coords, [0.6, 0.8])
    with pytest.raises(FloatingPointError):
        renormalize(np.zeros(3))


def test_stream_children_differ_and_replay():
    a, b = RngStream(1, 2), RngStream(1, 2)
    assert a.gen.random() == b.gen.random()
    assert RngStream(1, 2).gen.random() != RngStream(1, 3).gen.random()
    assert RngStream(1, 2).child(0).gen.random() != RngStream(1, 2).gen.random()
