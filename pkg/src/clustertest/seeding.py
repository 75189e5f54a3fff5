"""Deterministic seed splitting.

Every randomized component derives its generator through ``spawn(master, *path)``
with a documented integer path, so identical (seed, path) pairs always produce
identical streams and streams with different paths never collide.
"""

import numpy as np

# Stream tags used as the first path element. Keeping them in one table makes
# accidental path collisions between modules impossible.
STREAM_TESTER_START = 1
STREAM_TESTER_COINS = 2
STREAM_FAMILY_GEN = 3
STREAM_PROCESS = 4
STREAM_STRATEGY = 5
STREAM_TRIAL = 6
STREAM_BOOTSTRAP = 7
STREAM_QWALK = 8


def spawn(master_seed, *path):
    """Return a fresh ``numpy`` Generator for (master_seed, path)."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.default_rng(ss)


def spawn_int(master_seed, *path):
    """Derive a 63-bit integer seed (for components that take plain ints)."""
    return int(spawn(master_seed, *path).integers(0, 2**63))
