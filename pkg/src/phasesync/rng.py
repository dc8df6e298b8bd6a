"""Seeded random streams that give the same numbers on every platform.

Uniforms come from a SplitMix64 counter stream, normals from Box-Muller on
pairs of those uniforms. Both are plain uint64/float64 array arithmetic, so
the bit pattern depends only on the seed.
"""
import hashlib

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based SplitMix64 generator.

    Output ``i`` (1-based) is ``mix(seed + i * gamma)``, which lets a whole
    block be produced with one vectorized pass.
    """

    def __init__(self, seed):
        self.seed = int(seed) & _MASK64
        self._counter = 0

    def uint64(self, size):
        idx = np.arange(self._counter + 1, self._counter + size + 1, dtype=np.uint64)
        self._counter += size
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + idx * _GAMMA
            return _mix(z)

    def uniform(self, size):
        """Doubles in [0, 1) with 53 random bits."""
        return (self.uint64(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def standard_normal(self, size):
        npairs = (size + 1) // 2
        u = self.uniform(2 * npairs)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        ang = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * npairs)
        out[0::2] = r * np.cos(ang)
        out[1::2] = r * np.sin(ang)
        return out[:size]

    def signs(self, size):
        return np.where(self.uint64(size) >> np.uint64(63), 1.0, -1.0)


def derive_seed(*parts):
    """Stable 63-bit seed from any sequence of ints/strings/floats.

    BLAKE2b over the ``repr`` of the parts joined by ``:``; unaffected by
    PYTHONHASHSEED.
    """
    key = ":".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little") >> 1


def complex_normal(seed, size):
    """Complex vector with independent standard-normal real and imaginary parts."""
    g = SplitMix64(seed).standard_normal(2 * size)
    return g[0::2] + 1j * g[1::2]
