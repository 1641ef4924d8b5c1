"""Seeded random sources. Streams are derived from (seed, path...) so that any
round can be replayed on its own."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

UNIFORM_BITS = 64


class RandomSource:
    def __init__(self, seed: int = 0, *path: int):
        self.seed = seed
        self.path = path
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(path)))
        )

    def child(self, *path: int) -> RandomSource:
        return RandomSource(self.seed, *self.path, *path)

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return int(self._gen.integers(low, high, endpoint=True))

    def uniform_fraction(self) -> Fraction:
        """Uniform draw from {k / 2^64 : 0 <= k < 2^64}."""
        k = int(self._gen.integers(0, 2**UNIFORM_BITS, dtype=np.uint64))
        return Fraction(k, 2**UNIFORM_BITS)

    def uniform(self, low: float, high: float, size=None):
        return self._gen.uniform(low, high, size)
