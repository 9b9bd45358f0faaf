"""State space X = X_1 x ... x X_n of closed integer intervals.

States are plain tuples of ints and directions are tuples over {-1, +1}.
Coordinates are numbered 1..n in every public signature that takes a
coordinate index; internally arrays are 0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, DomainSizeError, SingletonIntervalError, StateError

State = tuple[int, ...]
Direction = tuple[int, ...]

MAX_CARDINALITY = 2**64 - 1


@dataclass(frozen=True)
class IntervalDomain:
    """Product of closed integer intervals ``[lower[i], upper[i]]``."""

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        lower = tuple(int(a) for a in self.lower)
        upper = tuple(int(b) for b in self.upper)
        if len(lower) != len(upper):
            raise DomainError("lower and upper bounds differ in length")
        if not lower:
            raise DomainError("a domain needs at least one coordinate")
        for i, (a, b) in enumerate(zip(lower, upper), start=1):
            if b == a:
                raise SingletonIntervalError(f"interval {i} is the singleton {{{a}}}")
            if b < a:
                raise DomainError(f"interval {i} is empty ({a}..{b})")
        if math.prod(b - a + 1 for a, b in zip(lower, upper)) > MAX_CARDINALITY:
            raise DomainSizeError("domain cardinality does not fit in 64 bits")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "IntervalDomain":
        """Domain ``{0..k1-1} x {0..k2-1} x ...``."""
        return cls(tuple(0 for _ in sizes), tuple(k - 1 for k in sizes))

    @classmethod
    def boolean(cls, n: int) -> "IntervalDomain":
        return cls.from_sizes([2] * n)

    @property
    def n(self) -> int:
        return len(self.lower)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lower, self.upper))

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.sizes)

    def __len__(self):
        return self.cardinality

    @cached_property
    def strides(self) -> tuple[int, ...]:
        # mixed radix, coordinate 1 most significant
        out = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            out[i] = out[i + 1] * self.sizes[i + 1]
        return tuple(out)

    @property
    def is_boolean(self) -> bool:
        return all(s == 2 for s in self.sizes)

    def interval(self, i: int) -> range:
        """Values of coordinate ``i`` (1-based)."""
        return range(self.lower[i - 1], self.upper[i - 1] + 1)

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.n and all(a <= c <= b for a, c, b in zip(self.lower, x, self.upper))

    def check_state(self, x: Sequence[int]) -> State:
        x = tuple(int(c) for c in x)
        if not self.contains(x):
            raise StateError(f"state {x} is outside the domain {self}")
        return x

    def rank(self, x: Sequence[int]) -> int:
        x = self.check_state(x)
        return sum((c - a) * s for c, a, s in zip(x, self.lower, self.strides))

    def unrank(self, k: int) -> State:
        if not 0 <= k < self.cardinality:
            raise StateError(f"index {k} is outside [0, {self.cardinality})")
        out = []
        for a, s, size in zip(self.lower, self.strides, self.sizes):
            out.append(a + (k // s) % size)
        return tuple(out)

    def states_array(self) -> np.ndarray:
        """All states as an ``(|X|, n)`` array in rank order (read-only)."""
        arr = self._cache.get("states")
        if arr is None:
            ranks = np.arange(self.cardinality, dtype=np.int64)
            cols = [
                a + (ranks // s) % size
                for a, s, size in zip(self.lower, self.strides, self.sizes)
            ]
            arr = np.stack(cols, axis=1)
            arr.flags.writeable = False
            self._cache["states"] = arr
        return arr

    def xprime_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorised X': ``(ranks, states, directions)`` in enumeration order."""
        cached = self._cache.get("xprime")
        if cached is not None:
            return cached
        states = self.states_array()
        ranks = np.arange(self.cardinality, dtype=np.int64)
        dirs = np.zeros((self.cardinality, 0), dtype=np.int64)
        # Expanding coordinate by coordinate keeps rows grouped by state and
        # leaves the direction list in sign-lexicographic order.
        for i in range(self.n):
            col = states[ranks, i]
            lo, hi = self.lower[i], self.upper[i]
            can_down = col > lo
            can_up = col < hi
            reps = can_down.astype(np.int64) + can_up.astype(np.int64)
            ranks = np.repeat(ranks, reps)
            dirs = np.repeat(dirs, reps, axis=0)
            signs = np.empty(len(ranks), dtype=np.int64)
            starts = np.cumsum(reps) - reps
            down_first = np.repeat(can_down, reps)
            first = np.zeros(len(ranks), dtype=bool)
            first[starts] = True
            signs[:] = 1
            signs[first & down_first] = -1
            dirs = np.concatenate([dirs, signs[:, None]], axis=1)
        out = (ranks, states[ranks], dirs)
        for a in out:
            a.flags.writeable = False
        self._cache["xprime"] = out
        return out

    def check_pair(self, x: Sequence[int], v: Sequence[int]) -> tuple[State, Direction]:
        x = self.check_state(x)
        v = tuple(int(c) for c in v)
        if len(v) != self.n or any(c not in (-1, 1) for c in v):
            raise StateError(f"direction {v} is not in {{-1,1}}^{self.n}")
        if not self.contains(tuple(a + b for a, b in zip(x, v))):
            raise StateError(f"(x, v) = ({x}, {v}) is not admissible: x + v leaves the domain")
        return x, v

    def __str__(self):
        return " x ".join(f"{a}..{b}" for a, b in zip(self.lower, self.upper))


def enumerate_states(domain: IntervalDomain, start: int = 0) -> Iterator[State]:
    """Yield every state in rank order, optionally resuming from rank ``start``."""
    if start == 0:
        yield from itertools.product(*(domain.interval(i) for i in range(1, domain.n + 1)))
        return
    for k in range(start, domain.cardinality):
        yield domain.unrank(k)


def admissible_directions(domain: IntervalDomain, x: Sequence[int]) -> Iterator[Direction]:
    options = []
    for c, a, b in zip(x, domain.lower, domain.upper):
        opts = []
        if c > a:
            opts.append(-1)
        if c < b:
            opts.append(1)
        options.append(opts)
    return itertools.product(*options)


def enumerate_xprime(domain: IntervalDomain) -> Iterator[tuple[State, Direction]]:
    """Yield the pairs (x, v) with x and x + v in the domain.

    States come in rank order; for each state the directions come in
    lexicographic order with -1 before +1.
    """
    for x in enumerate_states(domain):
        for v in admissible_directions(domain, x):
            yield x, v
