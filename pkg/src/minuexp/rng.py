"""Reproducible random streams and the documented stream-splitting rule.

A stream is a ``numpy.random.Generator``; the same seed always reproduces
the same draw sequence bit-exactly.  Parallel or per-path work derives
child streams from a master seed by XOR-ing the path index into the seed
and passing the result through a 64-bit mixing permutation (the splitmix64
finalizer), so stream i is a pure function of (master_seed, i).
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_stream", "split_seed", "substream"]

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit avalanche permutation."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def make_stream(seed: int) -> np.random.Generator:
    """A fresh generator for the given 64-bit seed."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    return np.random.default_rng(int(seed) & _MASK64)


def split_seed(master_seed: int, index: int) -> int:
    """Seed of child stream `index`: mix64(master_seed XOR index)."""
    if master_seed < 0 or index < 0:
        raise ValueError("master seed and index must be nonnegative integers")
    return _mix64((int(master_seed) & _MASK64) ^ (int(index) & _MASK64))


def substream(master_seed: int, index: int) -> np.random.Generator:
    """Child stream `index` derived from the master seed."""
    return make_stream(split_seed(master_seed, index))
