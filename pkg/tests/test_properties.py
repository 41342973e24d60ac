import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kacwalk import PairSchedule, SphereState, UpdateTriple, build_partitions, kac_step
from kacwalk.coupling import ArcsineParams, CoupledPair, arcsine_overlap, proportional_step
from kacwalk.rng import RngStream

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def sphere_points(draw, n_min=2, n_max=12):
    n = draw(st.integers(n_min, n_max))
    v = draw(arrays(np.float64, n, elements=finite))
    norm = float(np.linalg.norm(v))
    if norm < 1e-6:
        v = np.zeros(n)
        v[0] = 1.0
        norm = 1.0
    return SphereState(v / norm)


@st.composite
def updates(draw, n):
    i = draw(st.integers(1, n - 1))
    j = draw(st.integers(i + 1, n))
    return UpdateTriple(i, j, draw(st.floats(-20, 20, allow_nan=False)))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_step_preserves_norm_and_pair_mass(data):
    x = data.draw(sphere_points())
    u = data.draw(updates(x.n))
    out = kac_step(x, u)
    assert abs(float(out.coords @ out.coords) - 1.0) <= 1e-12
    before = x[u.i - 1] ** 2 + x[u.j - 1] ** 2
    after = out[u.i - 1] ** 2 + out[u.j - 1] ** 2
    assert math.isclose(before, after, rel_tol=1e-12, abs_tol=1e-15)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_inverse_rotation_undoes_step(data):
    x = data.draw(sphere_points())
    u = data.draw(updates(x.n))
    back = kac_step(kac_step(x, u), UpdateTriple(u.i, u.j, -u.theta))
    np.testing.assert_allclose(back.coords, x.coords, atol=1e-12)


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_proportional_step_never_increases_pair_gap(data):
    x = data.draw(sphere_points(3, 8))
    n = x.n
    v = data.draw(arrays(np.float64, n, elements=finite))
    if np.linalg.norm(v) < 1e-6:
        v = np.ones(n)
    y = SphereState(v / np.linalg.norm(v))
    u = data.draw(updates(n))
    out = proportional_step(CoupledPair(x, y), u, RngStream(0))
    i, j = u.i - 1, u.j - 1
    # the coupled pair masses sit on one ray, so signs agree on the pair
    assert out.x[i] * out.y[i] >= -1e-15 and out.x[j] * out.y[j] >= -1e-15
    gap = lambda p, k: p.x[k] ** 2 - p.y[k] ** 2
    total_before = abs(gap(CoupledPair(x, y), i) + gap(CoupledPair(x, y), j))
    assert math.isclose(abs(gap(out, i) + gap(out, j)), total_before, abs_tol=1e-12)


@given(st.integers(2, 9), st.lists(st.tuples(st.integers(0, 100), st.integers(0, 100)),
                                   max_size=40))
@settings(max_examples=200, deadline=None)
def test_partitions_refine_forward_and_count_merges(n, raw):
    pairs = []
    for a, b in raw:
        i, j = a % n + 1, b % n + 1
        if i != j:
            pairs.append((min(i, j), max(i, j)))
    p = build_partitions(PairSchedule(n, 0, tuple(pairs)))
    prev = None
    for t in range(p.t0, p.t_end + 1):
        blocks = p.blocks_at(t)
        assert sorted(k for b in blocks for k in b) == list(range(1, n + 1))
        assert len(blocks) == p.block_count_at(t)
        if prev is not None:
            # every block at t sits inside a block at t - 1
            assert all(any(b <= c for c in prev) for b in blocks)
        prev = blocks
    for m in p.merges:
        i_block = {k + 1 for k in m.block_i}
        assert p.blocks_at(m.time + 1).count(frozenset(i_block)) == 1
        assert frozenset(i_block | {k + 1 for k in m.block_j}) in p.blocks_at(m.time)


offsets = st.floats(0.0, 0.99, allow_nan=False)
fractions = st.floats(0.01, 1.0, allow_nan=False)


@st.composite
def params(draw):
    A, C = draw(offsets), draw(offsets)
    return ArcsineParams(A, draw(fractions) * (1 - A), C, draw(fractions) * (1 - C))


@given(params())
@settings(max_examples=300, deadline=None)
def test_overlap_is_a_symmetric_probability(p):
    v = arcsine_overlap(p)
    assert 0.0 <= v <= 1.0
    w = arcsine_overlap(ArcsineParams(p.C, p.D, p.A, p.B))
    assert math.isclose(v, w, abs_tol=1e-12)


@given(params())
@settings(max_examples=100, deadline=None)
def test_self_overlap_is_one(p):
    assert math.isclose(arcsine_overlap(ArcsineParams(p.A, p.B, p.A, p.B)), 1.0, abs_tol=1e-12)
