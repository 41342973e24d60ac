"""Backward partition-merge process over a fixed pair schedule.

Starting from singletons at ``t_end``, pairs are read from ``t_end - 1``
down to ``t0``; a pair whose endpoints sit in different blocks merges them.
The merge times form the set S. The partition at ``t0`` is a single block
exactly when the multigraph of all scheduled pairs is connected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .rng import as_generator
from .stats import wilson_interval
from .walk import sample_pairs


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size.

    ``members[root]`` lists the elements of each block so merge records can
    capture both sides.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.members = {k: [k] for k in range(n)}
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.members[ra].extend(self.members.pop(rb))
        self.count -= 1
        return True


@dataclass(frozen=True)
class PairSchedule:
    """Pairs ``(i_t, j_t)`` for ``t0 <= t < t_end``, 1-based with ``i < j``."""

    n: int
    t0: int
    pairs: tuple

    def __post_init__(self):
        if self.n < 2:
            raise UsageError(f"dimension must be at least 2, got n={self.n}")
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not 1 <= i < j <= self.n:
                raise UsageError(f"invalid pair ({i}, {j}) for n={self.n}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def t_end(self) -> int:
        return self.t0 + len(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @classmethod
    def sample(cls, n: int, length: int, rng, t0: int = 0) -> "PairSchedule":
        ii, jj = sample_pairs(n, length, as_generator(rng))
        return cls(n, t0, tuple(zip((ii + 1).tolist(), (jj + 1).tolist())))

    def as_arrays(self):
        """0-based index arrays ``(i, j)``."""
        if not self.pairs:
            return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
        a = np.asarray(self.pairs, dtype=np.intp) - 1
        return a[:, 0], a[:, 1]


@dataclass(frozen=True)
class Merge:
    """One element of S.

    ``block_i`` is the block of the partition at ``time + 1`` that holds
    ``i`` (the paper's u-block) and ``block_j`` the one holding ``j``; both
    are sorted tuples of 0-based indices.
    """

    time: int
    i: int
    j: int
    block_i: tuple
    block_j: tuple


@dataclass(frozen=True)
class PartitionSequence:
    """The partitions P_t for ``t0 <= t <= t_end`` in journal form.

    Only the merges are stored; :meth:`labels_at` and :meth:`blocks_at`
    rebuild any single partition on demand.
    """

    n: int
    t0: int
    t_end: int
    merges: tuple  # ascending in time

    @property
    def merge_times(self) -> tuple:
        return tuple(m.time for m in self.merges)

    def block_count_at(self, t: int) -> int:
        self._check_time(t)
        return self.n - sum(1 for m in self.merges if m.time >= t)

    def labels_at(self, t: int) -> np.ndarray:
        """Block label per coordinate (0-based array), labels are block minima."""
        self._check_time(t)
        uf = UnionFind(self.n)
        for m in reversed(self.merges):
            if m.time < t:
                break
            uf.union(m.i, m.j)
        roots = [uf.find(k) for k in range(self.n)]
        low = {}
        for k, r in enumerate(roots):
            low.setdefault(r, k)
        return np.array([low[r] for r in roots], dtype=np.intp)

    def blocks_at(self, t: int) -> list:
        """Blocks of P_t as frozensets of 1-based indices, ordered by minimum."""
        labels = self.labels_at(t)
        blocks = {}
        for k, lab in enumerate(labels.tolist()):
            blocks.setdefault(lab, set()).add(k + 1)
        return [frozenset(blocks[lab]) for lab in sorted(blocks)]

    def _check_time(self, t):
        if not self.t0 <= t <= self.t_end:
            raise UsageError(f"time {t} outside [{self.t0}, {self.t_end}]")

    def summary(self) -> dict:
        """JSON-ready summary row."""
        return {
            "n": self.n,
            "t0": self.t0,
            "t_end": self.t_end,
            "merge_count": len(self.merges),
            "blocks_at_t0": self.n - len(self.merges),
            "fully_merged": is_fully_merged(self),
            "merge_times": list(self.merge_times),
        }


def build_partitions(schedule: PairSchedule) -> PartitionSequence:
    """Run the backward merge recursion over ``schedule``."""
    n = schedule.n
    uf = UnionFind(n)
    merges = []
    for k in range(len(schedule) - 1, -1, -1):
        if uf.count == 1:
            break
        i, j = schedule.pairs[k]
        i -= 1
        j -= 1
        ri, rj = uf.find(i), uf.find(j)
        if ri == rj:
            continue
        bi = tuple(sorted(uf.members[ri]))
        bj = tuple(sorted(uf.members[rj]))
        uf.union(ri, rj)
        merges.append(Merge(schedule.t0 + k, i, j, bi, bj))
    merges.reverse()
    return PartitionSequence(n, schedule.t0, schedule.t_end, tuple(merges))


def is_fully_merged(p: PartitionSequence) -> bool:
    """True iff P_{t0} is the single block {1..n}."""
    return len(p.merges) == p.n - 1


def _connected(n: int, ii, jj) -> bool:
    uf = UnionFind(n)
    for a, b in zip(ii, jj):
        if uf.union(a, b) and uf.count == 1:
            return True
    return n == 1


def connectivity_probability(n: int, m: int, replicas: int, rng, level: float = 0.99):
    """Monte Carlo probability that ``m`` uniform edges connect ``n`` vertices.

    Edges may repeat. Returns ``(estimate, (low, high), hits)`` with a
    Wilson interval at ``level``.
    """
    if replicas < 1:
        raise UsageError("replicas must be at least 1")
    gen = as_generator(rng)
    hits = 0
    for _ in range(replicas):
        ii, jj = sample_pairs(n, m, gen)
        # the backward process reads pairs last-to-first
        hits += _connected(n, ii[::-1].tolist(), jj[::-1].tolist())
    return hits / replicas, wilson_interval(hits, replicas, level), hits
