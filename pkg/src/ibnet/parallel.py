"""Sample-parallel execution with schedule-independent randomness.

Every Monte Carlo routine derives the randomness of sample ``k`` from
``(master seed, k)`` only, so results are identical for any worker count
or scheduling order. The worker count comes from the ``IBNET_WORKERS``
environment variable (default 1) and never influences numerical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

WORKERS_ENV = "IBNET_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def child_rng(seed: int | None, index: int) -> np.random.Generator:
    """Deterministic per-sample generator from (master seed, sample index)."""
    if seed is None:
        seed = 0
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def map_samples(fn: Callable[[int], T], n: int, workers: int | None = None) -> list[T]:
    """Evaluate ``fn(0..n-1)``, possibly across processes; order preserved."""
    if workers is None:
        workers = worker_count()
    if workers <= 1 or n <= 1:
        return [fn(k) for k in range(n)]
    chunksize = max(1, n // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), chunksize=chunksize))


def indexed_seeds(seed: int | None, n: int) -> list[np.random.SeedSequence]:
    if seed is None:
        seed = 0
    return [np.random.SeedSequence(entropy=seed, spawn_key=(k,)) for k in range(n)]
