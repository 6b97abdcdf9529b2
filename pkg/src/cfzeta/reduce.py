"""Fixed-order summation.

Terms are laid out in chunks of ``CHUNK`` entries.  Each chunk is summed on
its own, then chunk totals are combined by a balanced pairwise tree.  The
order of operations depends only on the number of terms, never on the number
of worker threads, so results are bit-identical for every worker count.
"""
from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 1024


def padded_length(n: int) -> int:
    return max(1, -(-n // CHUNK)) * CHUNK


def tree_sum(values: np.ndarray) -> complex:
    """Balanced pairwise sum; odd levels are padded with an explicit zero."""
    v = np.asarray(values)
    if v.size == 0:
        return 0j
    while v.size > 1:
        if v.size % 2:
            v = np.concatenate([v, np.zeros(1, dtype=v.dtype)])
        v = v[0::2] + v[1::2]
    return complex(v[0])


@functools.lru_cache(maxsize=None)
def _executor(workers: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=workers, thread_name_prefix="cfzeta")


def split_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    bounds = [n * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i] < bounds[i + 1]]


def chunked_sum(chunk_fn, nchunks: int, workers: int = 1) -> complex:
    """Sum ``chunk_fn(c0, c1)`` (which returns one total per chunk) over all chunks."""
    totals = np.empty(nchunks, dtype=np.complex128)
    if workers <= 1 or nchunks < 2:
        totals[:] = chunk_fn(0, nchunks)
    else:
        ranges = split_ranges(nchunks, workers)
        futures = [(a, b, _executor(workers).submit(chunk_fn, a, b)) for a, b in ranges]
        for a, b, fut in futures:
            totals[a:b] = fut.result()
    return tree_sum(totals)
