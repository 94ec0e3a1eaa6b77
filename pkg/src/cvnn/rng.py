"""Seeded, platform-independent uniform random numbers.

Counter-based SplitMix64 (Steele, Lea and Flood, 2014): output i is
``mix64(seed + (i+1) * GOLDEN)`` with the standard finalizer constants.
Because the generator is a pure function of (seed, counter), the scalar
and vectorized paths produce the same stream, and identical seeds give
bit-identical sequences on every platform.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


class Rng:
    """Deterministic uniform generator on [0, 1)."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self._i = 0

    def random(self) -> float:
        """Next double in [0, 1), using the top 53 bits of the word."""
        self._i += 1
        word = _mix64((self.seed + self._i * _GOLDEN) & _MASK)
        return (word >> 11) * 2.0**-53

    def random_array(self, n: int) -> np.ndarray:
        """Next n doubles in [0, 1); same stream as n calls to random()."""
        idx = np.arange(self._i + 1, self._i + n + 1, dtype=np.uint64)
        self._i += n
        z = np.uint64(self.seed) + idx * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def uniform_array(self, lo: float, hi: float, n: int) -> np.ndarray:
        return lo + (hi - lo) * self.random_array(n)

    def normal_array(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on consecutive uniform pairs."""
        m = (n + 1) // 2
        u1 = 1.0 - self.random_array(m)  # keep log() away from 0
        u2 = self.random_array(m)
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.concatenate([r * np.cos(2.0 * math.pi * u2), r * np.sin(2.0 * math.pi * u2)])
        return out[:n]

    def complex_array(self, n: int, scale: float = 1.0) -> np.ndarray:
        """n complex numbers with Re, Im independent uniform on [-scale, scale)."""
        re = self.uniform_array(-scale, scale, n)
        im = self.uniform_array(-scale, scale, n)
        return re + 1j * im

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n)."""
        perm = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = int(self.random() * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm
