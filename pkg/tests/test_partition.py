import itertools
from fractions import Fraction

import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from kacwalk import (
    PairSchedule,
    RngStream,
    UsageError,
    build_partitions,
    connectivity_probability,
    is_fully_merged,
)


def connected_oracle(n, pairs):
    """Connectivity of the multigraph of ``pairs`` via scipy's BFS."""
    if not pairs:
        return n == 1
    a = np.array(pairs) - 1
    g = coo_matrix((np.ones(len(a)), (a[:, 0], a[:, 1])), shape=(n, n))
    return connected_components(g, directed=False)[0] == 1


def enumerate_connectivity(n, m):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    good = sum(connected_oracle(n, list(seq)) for seq in itertools.product(pairs, repeat=m))
    return Fraction(good, len(pairs) ** m)


def test_hand_trace():
    # pairs at t = 0, 1, 2, 3; read backward: (1,2)@3 merge, (3,4)@2 merge,
    # (1,2)@1 already joined, (2,3)@0 joins {1,2} and {3,4}
    sched = PairSchedule(4, 0, ((2, 3), (1, 2), (3, 4), (1, 2)))
    p = build_partitions(sched)
    assert p.merge_times == (0, 2, 3)
    assert p.blocks_at(4) == [frozenset({k}) for k in range(1, 5)]
    assert p.blocks_at(3) == [frozenset({1, 2}), frozenset({3}), frozenset({4})]
    assert p.blocks_at(1) == [frozenset({1, 2}), frozenset({3, 4})]
    assert p.blocks_at(0) == [frozenset({1, 2, 3, 4})]
    m0 = p.merges[0]
    assert (m0.i, m0.j, m0.block_i, m0.block_j) == (1, 2, (0, 1), (2, 3))
    assert is_fully_merged(p)
    assert p.summary()["blocks_at_t0"] == 1


def test_merge_stops_at_one_block():
    sched = PairSchedule(2, 5, ((1, 2), (1, 2), (1, 2)))
    p = build_partitions(sched)
    assert p.merge_times == (7,)
    assert p.block_count_at(5) == 1 and p.block_count_at(8) == 2
    with pytest.raises(UsageError):
        p.labels_at(9)


def test_schedule_validation():
    with pytest.raises(UsageError):
        PairSchedule(3, 0, ((2, 1),))
    with pytest.raises(UsageError):
        PairSchedule(3, 0, ((1, 4),))
    with pytest.raises(UsageError):
        PairSchedule(1, 0, ())


@pytest.mark.parametrize("seed", range(30))
def test_fully_merged_matches_bfs(seed):
    gen = RngStream(seed).gen
    n = int(gen.integers(2, 9))
    length = int(gen.integers(0, 20))
    sched = PairSchedule.sample(n, length, gen)
    p = build_partitions(sched)
    assert is_fully_merged(p) == connected_oracle(n, list(sched.pairs))
    # every partition is the component structure of the pairs after it
    for t in range(sched.t0, sched.t_end + 1):
        later = list(sched.pairs[t - sched.t0:])
        comps = len(p.blocks_at(t))
        if later:
            a = np.array(later) - 1
            g = coo_matrix((np.ones(len(a)), (a[:, 0], a[:, 1])), shape=(n, n))
            expect = connected_components(g, directed=False)[0]
        else:
            expect = n
        assert comps == expect


def test_exact_enumeration_small():
    assert enumerate_connectivity(3, 2) == Fraction(2, 3)
    assert enumerate_connectivity(3, 1) == 0


def test_connectivity_probability_small_case():
    est, (lo, hi), hits = connectivity_probability(3, 2, 20_000, RngStream(4))
    assert lo <= 2 / 3 <= hi
    assert est == hits / 20_000
