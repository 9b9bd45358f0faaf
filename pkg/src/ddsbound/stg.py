"""Asynchronous state transition graph, trap domains and attractors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .domain import IntervalDomain, State
from .errors import CapExceeded, DDSError
from .network import Network

ORACLE_LIMIT = 4096


@dataclass(frozen=True)
class TransitionGraph:
    """Successor lists by state rank; each list is sorted by coordinate."""

    domain: IntervalDomain
    successors: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.successors)

    def edges(self) -> Iterable[tuple[int, int]]:
        for k, succ in enumerate(self.successors):
            for m in succ:
                yield k, m

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.successors)


def build_stg(net: Network) -> TransitionGraph:
    cached = net._cache.get("stg")
    if cached is not None:
        return cached
    dom = net.domain
    states = dom.states_array()
    step = np.sign(net.images - states)  # (|X|, n)
    moves = step * np.array(dom.strides, dtype=np.int64)
    ranks = np.arange(dom.cardinality, dtype=np.int64)[:, None]
    targets = (ranks + moves).tolist()
    movers = (step != 0).tolist()
    succ = tuple(
        tuple(t for t, m in zip(row_t, row_m) if m) for row_t, row_m in zip(targets, movers)
    )
    g = TransitionGraph(dom, succ)
    net._cache["stg"] = g
    return g


def _as_ranks(g: TransitionGraph, a) -> set[int]:
    out = set()
    for item in a:
        out.add(item if isinstance(item, (int, np.integer)) else g.domain.rank(item))
    return out


def is_trap_domain(g: TransitionGraph, a) -> bool:
    """True iff no edge of ``g`` leaves ``a`` (ranks or state tuples)."""
    ranks = _as_ranks(g, a)
    if not ranks:
        raise DDSError("a trap domain must be non-empty")
    for k in ranks:
        if not 0 <= k < len(g):
            raise DDSError(f"rank {k} is outside the state space")
    return all(m in ranks for k in ranks for m in g.successors[k])


def strongly_connected_components(g: TransitionGraph) -> list[list[int]]:
    """Iterative Tarjan; components are emitted in reverse topological order."""
    succ = g.successors
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            out = succ[v]
            if pos < len(out):
                work[-1] = (v, pos + 1)
                w = out[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def attractors(g: TransitionGraph) -> list[frozenset[int]]:
    """Terminal strongly connected components, ordered by smallest rank."""
    comps = strongly_connected_components(g)
    comp_of = [0] * len(g)
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    out = []
    for c, members in enumerate(comps):
        if all(comp_of[w] == c for v in members for w in g.successors[v]):
            out.append(frozenset(members))
    out.sort(key=min)
    return out


def network_attractors(net: Network) -> list[frozenset[int]]:
    """``attractors(build_stg(net))``, memoised on the network."""
    cached = net._cache.get("attractors")
    if cached is None:
        cached = net._cache["attractors"] = attractors(build_stg(net))
    return cached


def attractors_oracle(g: TransitionGraph, limit: int = ORACLE_LIMIT) -> list[frozenset[int]]:
    """Inclusion-minimal forward closures R(x), for testing ``attractors``.

    R(x) is the set of states reachable from x, computed as bitsets by
    fixed-point propagation. R(x) is minimal among all R(y) iff every state
    in R(x) has a closure of the same size, which is tracked by propagating
    the minimum closure size along the same edges.
    """
    n = len(g)
    if n > limit:
        raise CapExceeded(f"oracle limited to {limit} states, got {n}")
    succ = g.successors
    reach = [1 << k for k in range(n)]
    order = range(n - 1, -1, -1)
    changed = True
    while changed:
        changed = False
        for k in order:
            r = reach[k]
            for m in succ[k]:
                r |= reach[m]
            if r != reach[k]:
                reach[k] = r
                changed = True
    size = [r.bit_count() if hasattr(r, "bit_count") else bin(r).count("1") for r in reach]
    smallest = list(size)
    changed = True
    while changed:
        changed = False
        for k in order:
            s = smallest[k]
            for m in succ[k]:
                if smallest[m] < s:
                    s = smallest[m]
            if s < smallest[k]:
                smallest[k] = s
                changed = True
    found = {}
    for k in range(n):
        if smallest[k] == size[k] and reach[k] not in found:
            found[reach[k]] = frozenset(m for m in range(n) if reach[k] >> m & 1)
    return sorted(found.values(), key=min)


def attractor_states(g: TransitionGraph, attractor: Iterable[int]) -> list[State]:
    return [g.domain.unrank(k) for k in sorted(attractor)]
