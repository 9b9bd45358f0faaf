"""SplitMix64 as a counter-based, splittable generator.

Output ``k`` (k = 0, 1, ...) of the stream with key ``K`` is
``mix64(K + (k + 1) * GAMMA mod 2**64)``, i.e. the standard SplitMix64
sequence seeded with ``K``. The child stream with tag ``t`` has key
``mix64(K + (t + 1) * GAMMA)``, the t-th output of the parent. A bounded
draw in ``[0, m)`` is ``((z >> 32) * m) >> 32`` for ``m < 2**32``.
These constants and formulas are all that is needed to reproduce the
generated networks in another language.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "splitmix64-counter"
GAMMA = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB
MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * MUL1) & MASK
    z = ((z ^ (z >> 27)) * MUL2) & MASK
    return z ^ (z >> 31)


def derive(key: int, *path: int) -> int:
    for t in path:
        key = mix64(key + (t + 1) * GAMMA)
    return key


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MUL2)
    return z ^ (z >> np.uint64(31))


class Stream:
    """Sequential reader over one SplitMix64 stream."""

    def __init__(self, key: int):
        self.key = key & MASK
        self.counter = 0

    def child(self, tag: int) -> "Stream":
        return Stream(derive(self.key, tag))

    def raw(self, count: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + count + 1, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            return _mix_array(np.uint64(self.key) + k * np.uint64(GAMMA))

    def below(self, bounds, count: int | None = None) -> np.ndarray:
        """Draws in ``[0, bounds)``; ``bounds`` broadcasts against the last axis."""
        bounds = np.asarray(bounds, dtype=np.uint64)
        if count is None:
            shape = bounds.shape
        else:
            shape = (count,) + bounds.shape
        z = self.raw(int(np.prod(shape, dtype=np.int64))).reshape(shape)
        with np.errstate(over="ignore"):
            return (((z >> np.uint64(32)) * bounds) >> np.uint64(32)).astype(np.int64)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + int(self.below(hi - lo + 1))

    def choice(self, items, k: int) -> list:
        """``k`` distinct items by a partial Fisher-Yates shuffle."""
        items = list(items)
        for a in range(k):
            b = a + int(self.below(len(items) - a))
            items[a], items[b] = items[b], items[a]
        return items[:k]
