"""Splittable, seedable random streams.

Every stream is addressed by ``(seed, stream_id)`` plus an optional path of
child indices, so the stream for replica ``r`` can be built directly without
generating any other stream. The bit generator is Philox (counter based).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


class RngStream:
    """A reproducible random stream owned by one execution lane.

    Parameters
    ----------
    seed : int
        64-bit experiment seed.
    stream_id : int
        64-bit stream (replica or chunk) index.
    path : tuple of int, optional
        Child indices below ``stream_id``; see :meth:`child`.
    """

    __slots__ = ("seed", "stream_id", "path", "gen")

    def __init__(self, seed: int, stream_id: int = 0, path: tuple[int, ...] = ()):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        self.gen = np.random.Generator(np.random.Philox(ss))

    def child(self, *index: int) -> "RngStream":
        """Independent sub-stream, e.g. one per replica inside a chunk."""
        return RngStream(self.seed, self.stream_id, self.path + tuple(index))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path})"


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a numpy Generator, or an int seed."""
    if isinstance(rng, RngStream):
        return rng.gen
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).gen
    raise TypeError(f"cannot build a random generator from {type(rng).__name__}")
