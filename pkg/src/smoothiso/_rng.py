"""Counter-based random streams.

Every stream is a Philox generator whose key is derived from a seed path
``(master, *indices)``.  Draw ``j`` of a stream depends only on the key and
``j``, so a replication produces the same numbers whether it runs first,
last, or in another process.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, tuple]


def seed_path(seed: SeedLike, *keys: int) -> tuple:
    if isinstance(seed, (int, np.integer)):
        base = (int(seed),)
    else:
        base = tuple(int(s) for s in seed)
    if not base:
        raise ValueError("empty seed path")
    if any(s < 0 for s in base + tuple(keys)):
        raise ValueError("seed components must be nonnegative")
    return base + tuple(int(k) for k in keys)


def stream(seed: SeedLike, *keys: int) -> np.random.Generator:
    path = seed_path(seed, *keys)
    ss = np.random.SeedSequence(path[0], spawn_key=path[1:])
    return np.random.Generator(np.random.Philox(ss))


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % (2**63))
