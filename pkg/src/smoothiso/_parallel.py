"""Order-preserving parallel map over replication indices.

Jobs close over models built from lambdas, which do not pickle, so the
job is parked in a module global and inherited by forked workers; only
the integer indices and the (numeric) results cross process boundaries.
"""

from __future__ import annotations

import multiprocessing as mp
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

WORKERS_ENV = "SMOOTHISO_WORKERS"

_JOB: Optional[Callable] = None


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV}={raw!r} is not an integer") from None


def _call(i):
    return _JOB(i)


def parallel_map(fn: Callable, indices: Sequence[int], workers: Optional[int] = None) -> List:
    """``[fn(i) for i in indices]``, possibly computed by several workers."""
    workers = default_workers() if workers is None else max(1, int(workers))
    indices = list(indices)
    if workers == 1 or len(indices) < 2:
        return [fn(i) for i in indices]
    global _JOB
    if "fork" not in mp.get_all_start_methods():
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, indices))
    _JOB = fn
    try:
        chunk = max(1, len(indices) // (4 * workers))
        with mp.get_context("fork").Pool(workers) as pool:
            return pool.map(_call, indices, chunksize=chunk)
    finally:
        _JOB = None
