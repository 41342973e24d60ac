"""Fixed-size chunking of replicas over a worker pool.

Chunk ``k`` always covers replicas ``[k * chunk_size, (k + 1) * chunk_size)``
and draws from the stream ``(seed, k)``, so results do not depend on how
many workers run the chunks. Partial results are merged in chunk order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def chunks(replicas: int, chunk_size: int):
    """``(index, first_replica, count)`` for every chunk."""
    out = []
    start = 0
    k = 0
    while start < replicas:
        m = min(chunk_size, replicas - start)
        out.append((k, start, m))
        start += m
        k += 1
    return out


def map_chunks(fn, cfg, *args, workers: int | None = None):
    """Apply ``fn(cfg, index, first, count, *args)`` to every chunk, in order."""
    work = chunks(cfg.replicas, cfg.chunk_size)
    workers = cfg.workers if workers is None else workers
    if workers <= 1 or len(work) <= 1:
        return [fn(cfg, k, first, m, *args) for k, first, m in work]
    with ProcessPoolExecutor(max_workers=min(workers, len(work))) as pool:
        futures = [pool.submit(fn, cfg, k, first, m, *args) for k, first, m in work]
        return [f.result() for f in futures]
