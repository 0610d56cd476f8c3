"""Seed derivation and hashing helpers.

All randomness in the package flows from explicit 64-bit seeds. Sub-seeds
are derived with splitmix64 so that runs are reproducible bit-for-bit
across processes and worker counts.
"""

import hashlib

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 output step (Steele et al. mixing constants)."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic sub-seed for stream `index` of a master seed."""
    return splitmix64((master_seed & _MASK64) ^ splitmix64(index & _MASK64))


def world_seed(master_seed: int, world_index: int) -> int:
    """Seed of the i-th sampled world under a master seed."""
    return derive_seed(master_seed, world_index)


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
