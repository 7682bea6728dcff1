"""Seeded random streams.

Streams are ``random.Random`` instances (cheap scalar draws in tight loops),
seeded from a numpy ``SeedSequence`` keyed by ``(seed, island, replication)``.
The key never involves ``mu`` or scheduling, so island ``i`` of replication
``r`` sees the same stream in every configuration.
"""

from __future__ import annotations

import math
import random
import zlib

import numpy as np

_INV_E = math.exp(-1.0)


def derive_island_rng(seed: int, island: int, replication: int = 0) -> random.Random:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(island), int(replication)))
    words = ss.generate_state(4, dtype=np.uint64)
    return random.Random(int.from_bytes(words.tobytes(), "little"))


def derive_numpy_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def derive_seed(master: int, *key: int) -> int:
    """A 64-bit child seed of ``master`` for the integer key path ``key``."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stable_key(text: str) -> int:
    """Process-independent integer digest of a string (unlike ``hash``)."""
    return zlib.crc32(text.encode("utf-8"))


def poisson1_sample(rng) -> int:
    """Draw S ~ Poisson(1) by sequential inversion of the cdf."""
    u = rng.random()
    k = 0
    p = _INV_E
    cdf = p
    while u > cdf:
        k += 1
        p /= k
        cdf += p
        if p < 1e-300:
            break
    return k
