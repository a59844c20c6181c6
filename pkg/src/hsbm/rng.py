"""Seed handling.

Every random draw in the package goes through :func:`substream`, which maps a
64-bit seed plus a purpose tag to an independent PCG64 generator.  Per-trial
seeds of the phase-diagram sweep come from :func:`mix_seed`, a splitmix64
fold, so results do not depend on scheduling.
"""
from __future__ import annotations

import zlib

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed (order-sensitive)."""
    h = 0
    for part in parts:
        h = splitmix64(h ^ (int(part) & MASK64))
    return h


def _tag_key(tag: str | int) -> int:
    if isinstance(tag, int):
        return tag & 0xFFFFFFFF
    return zlib.crc32(tag.encode("utf-8"))


def substream(seed: int, *tags: str | int) -> np.random.Generator:
    """Independent generator for ``(seed, *tags)``."""
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64,
                                spawn_key=tuple(_tag_key(t) for t in tags))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(seed, *tags: str | int) -> np.random.Generator:
    """Pass a Generator through untouched, otherwise derive a substream."""
    if isinstance(seed, np.random.Generator):
        return seed
    return substream(seed, *tags)
