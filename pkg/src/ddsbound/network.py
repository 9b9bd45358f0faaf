"""Tabulated maps F : X -> X."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .domain import IntervalDomain, State
from .errors import DomainError, DomainSizeError, StateError

MAX_STATES = 2**24


@dataclass(frozen=True, eq=False)
class Network:
    """A total map on ``domain`` stored as an ``(|X|, n)`` image array.

    Row ``k`` holds ``F(unrank(k))``. ``clamped_values`` counts rule values
    that were clamped into range during elaboration; it is metadata and does
    not take part in equality.
    """

    domain: IntervalDomain
    images: np.ndarray
    names: tuple[str, ...] = ()
    clamped_values: int = field(default=0, compare=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        dom = self.domain
        if dom.cardinality > MAX_STATES:
            raise DomainSizeError(f"|X| = {dom.cardinality} exceeds the tabulation limit {MAX_STATES}")
        images = np.array(self.images, dtype=np.int64, copy=True)
        if images.shape != (dom.cardinality, dom.n):
            raise DomainError(f"image table has shape {images.shape}, expected {(dom.cardinality, dom.n)}")
        lo = np.array(dom.lower)
        hi = np.array(dom.upper)
        bad = np.nonzero(((images < lo) | (images > hi)).any(axis=1))[0]
        if len(bad):
            k = int(bad[0])
            raise StateError(f"F({dom.unrank(k)}) = {tuple(images[k])} is outside the domain")
        images.flags.writeable = False
        object.__setattr__(self, "images", images)
        names = tuple(self.names) or tuple(f"x{i}" for i in range(1, dom.n + 1))
        if len(names) != dom.n:
            raise DomainError("one name per coordinate is required")
        object.__setattr__(self, "names", names)

    @classmethod
    def from_function(cls, domain: IntervalDomain, func, **kw) -> "Network":
        states = domain.states_array()
        images = [tuple(func(tuple(int(c) for c in x))) for x in states]
        return cls(domain, np.array(images, dtype=np.int64).reshape(domain.cardinality, domain.n), **kw)

    @property
    def n(self) -> int:
        return self.domain.n

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash((self.domain, self.images.tobytes()))

    def __call__(self, x: Sequence[int]) -> State:
        return evaluate(self, x)

    def image_of_rank(self, k: int) -> State:
        return tuple(int(c) for c in self.images[k])


def evaluate(net: Network, x: Sequence[int]) -> State:
    return net.image_of_rank(net.domain.rank(x))


@dataclass(frozen=True)
class RestrictionSpec:
    """Clamp window ``[lo, hi]`` for coordinate ``coord`` (1-based)."""

    coord: int
    lo: int
    hi: int

    @classmethod
    def of(cls, coord: int, window: Sequence[int]) -> "RestrictionSpec":
        return cls(coord, min(window), max(window))

    def validate(self, domain: IntervalDomain):
        if not 1 <= self.coord <= domain.n:
            raise DomainError(f"coordinate {self.coord} is not in 1..{domain.n}")
        a, b = domain.lower[self.coord - 1], domain.upper[self.coord - 1]
        if self.lo > self.hi:
            raise DomainError("restriction window is empty")
        if self.lo < a or self.hi > b:
            raise DomainError(f"window {self.lo}..{self.hi} is not inside {a}..{b}")


def restrict_component(net: Network, spec: RestrictionSpec) -> Network:
    """Clamp component ``spec.coord`` of F into the window, leave the others."""
    spec.validate(net.domain)
    images = np.array(net.images)
    col = spec.coord - 1
    images[:, col] = np.clip(images[:, col], spec.lo, spec.hi)
    return Network(net.domain, images, net.names, net.clamped_values)


def fixed_points(net: Network) -> list[State]:
    states = net.domain.states_array()
    idx = np.nonzero((net.images == states).all(axis=1))[0]
    return [net.image_of_rank(int(k)) for k in idx]
