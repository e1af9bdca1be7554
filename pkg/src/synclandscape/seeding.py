"""Deterministic 64-bit seed derivation.

Every Monte-Carlo unit (trial, cell, probe sample) gets its own seed mixed
from a base seed and its coordinates, so results do not depend on the
order or the process in which units are executed.
"""

from __future__ import annotations

import struct

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *keys: int) -> int:
    """Mix ``base`` with each key in turn; returns an unsigned 64-bit int."""
    s = int(base) & MASK64
    for key in keys:
        s = splitmix64(s ^ splitmix64(int(key) & MASK64))
    return s


def float_key(x: float) -> int:
    """IEEE-754 bit pattern of ``x``, usable as a :func:`derive_seed` key."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & MASK64)
