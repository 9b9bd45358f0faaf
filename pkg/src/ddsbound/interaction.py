"""Discrete Jacobians, local and global interaction graphs, threshold sets.

Thresholds ``x_i + v_i/2`` are handled as doubled integers ``2*x_i + v_i``,
so the "on both sides" test is an exact integer comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuits import (
    MAX_CIRCUITS,
    MAX_VERTICES,
    TABLE_MAX_VERTICES,
    CircuitFamily,
    SignedCircuit,
    Witness,
    positive_cycle_on,
    support_table,
    vertex_cycles,
)
from .domain import IntervalDomain
from .errors import CapExceeded
from .graphs import SignedDigraph
from .network import Network


def jacobian(net: Network, x: Sequence[int], v: Sequence[int]) -> np.ndarray:
    """Matrix with ``[i-1, j-1] = (f_i(x + v_j e_j) - f_i(x)) / v_j``."""
    dom = net.domain
    x, v = dom.check_pair(x, v)
    fx = net(x)
    out = np.zeros((dom.n, dom.n), dtype=np.int64)
    for j in range(dom.n):
        y = list(x)
        y[j] += v[j]
        fy = net(y)
        for i in range(dom.n):
            out[i, j] = (fy[i] - fx[i]) * v[j]  # v_j is +-1, so dividing is multiplying
    return out


def local_graph_unthresholded(net: Network, x, v) -> SignedDigraph:
    jac = jacobian(net, x, v)
    return SignedDigraph.from_signs(np.sign(jac))


def local_graph(net: Network, x, v) -> SignedDigraph:
    """Local graph keeping j -> i only when f_i(x), f_i(x + v_j e_j) straddle x_i + v_i/2."""
    dom = net.domain
    x, v = dom.check_pair(x, v)
    fx = net(x)
    edges = set()
    for j in range(dom.n):
        y = list(x)
        y[j] += v[j]
        fy = net(y)
        for i in range(dom.n):
            d = (fy[i] - fx[i]) * v[j]
            t2 = 2 * x[i] + v[i]
            lo, hi = sorted((2 * fx[i], 2 * fy[i]))
            if d != 0 and lo < t2 < hi:
                edges.add((j + 1, 1 if d > 0 else -1, i + 1))
    return SignedDigraph(dom.n, frozenset(edges))


def local_sign_arrays(net: Network) -> tuple[np.ndarray, np.ndarray]:
    """Sign tensors over X' in enumeration order, ``[p, i, j]`` for edge j -> i.

    Returns ``(thresholded, unthresholded)`` int8 arrays.
    """
    cached = net._cache.get("signs")
    if cached is not None:
        return cached
    dom = net.domain
    n = dom.n
    ranks, xs, vs = dom.xprime_arrays()
    images = net.images
    fx = images[ranks]
    strides = np.array(dom.strides, dtype=np.int64)
    thresholds = 2 * xs + vs
    unthr = np.zeros((len(ranks), n, n), dtype=np.int8)
    thr = np.zeros_like(unthr)
    for j in range(n):
        fy = images[ranks + vs[:, j] * strides[j]]
        s = np.sign((fy - fx) * vs[:, j : j + 1]).astype(np.int8)
        a, b = 2 * fx, 2 * fy
        straddle = (np.minimum(a, b) < thresholds) & (thresholds < np.maximum(a, b))
        unthr[:, :, j] = s
        thr[:, :, j] = np.where(straddle, s, 0)
    for arr in (thr, unthr):
        arr.flags.writeable = False
    net._cache["signs"] = (thr, unthr)
    return thr, unthr


def _masks(signs: np.ndarray) -> tuple[list[int], list[int]]:
    """Successor and negative-successor bitmasks of a single-sign ``[i, j]`` matrix."""
    n = len(signs)
    succ = [0] * n
    neg = [0] * n
    for i, j in zip(*np.nonzero(signs)):
        succ[j] |= 1 << int(i)
        if signs[i, j] < 0:
            neg[j] |= 1 << int(i)
    return succ, neg


@lru_cache(maxsize=1 << 16)
def _analyse(n: int, key: bytes) -> tuple[int, ...]:
    """Positive-support bitmasks of one single-sign local graph, by enumeration."""
    succ, neg = _masks(np.frombuffer(key, dtype=np.int8).reshape(n, n))
    found = set()
    for count, cyc in enumerate(vertex_cycles(n, succ)):
        if count >= MAX_CIRCUITS:
            raise CapExceeded(f"more than {MAX_CIRCUITS} circuits in one local graph")
        r = len(cyc)
        parity = 0
        mask = 0
        for k in range(r):
            parity ^= neg[cyc[k]] >> cyc[(k + 1) % r] & 1
            mask |= 1 << cyc[k]
        if not parity:
            found.add(mask)
    return tuple(sorted(found))


def _support_masks(uniq: np.ndarray) -> list[tuple[int, ...]]:
    """Positive-support bitmasks for each distinct ``(n, n)`` sign matrix."""
    count, n, _ = uniq.shape
    if n > TABLE_MAX_VERTICES:
        return [_analyse(n, row.tobytes()) for row in uniq]
    # [u, i, j] for j -> i becomes [u, v, w] for v -> w
    edges = uniq.transpose(0, 2, 1)
    table = support_table(edges > 0, edges < 0)
    out: list[list[int]] = [[] for _ in range(count)]
    for mask, u in zip(*np.nonzero(table)):
        out[u].append(int(mask))
    return [tuple(m) for m in out]


def _circuit(signs: np.ndarray, mask: int) -> SignedCircuit:
    succ, neg = _masks(signs)
    cyc = positive_cycle_on(succ, neg, mask)
    r = len(cyc)
    return SignedCircuit(
        tuple((cyc[k] + 1, int(signs[cyc[(k + 1) % r], cyc[k]]), cyc[(k + 1) % r] + 1) for k in range(r))
    )


@dataclass(frozen=True)
class ThresholdSet:
    """``doubled[i-1]`` is the sorted tuple of ``2t`` for t in T_i."""

    doubled: tuple[tuple[int, ...], ...]

    def __getitem__(self, i: int) -> frozenset[Fraction]:
        return frozenset(Fraction(d, 2) for d in self.doubled[i - 1])

    def size(self, i: int) -> int:
        return len(self.doubled[i - 1])

    def __len__(self):
        return len(self.doubled)

    def to_dict(self) -> dict[str, list[int]]:
        return {str(i): list(d) for i, d in enumerate(self.doubled, start=1)}


@dataclass
class LocalScan:
    """One pass over X' grouping identical local graphs.

    ``inverse[p]`` maps the p-th admissible pair to its distinct graph;
    ``analyses[u]`` lists the positive supports of distinct graph u as
    vertex bitmasks (bit v-1 for vertex v).
    """

    net: Network
    thresholded: bool
    signs: np.ndarray
    unique_signs: np.ndarray
    first_index: np.ndarray
    inverse: np.ndarray
    analyses: list
    on_positive: np.ndarray  # (U, n) bool: vertex lies on a positive circuit
    family: CircuitFamily
    thresholds: ThresholdSet

    def pair(self, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        _, xs, vs = self.net.domain.xprime_arrays()
        return tuple(int(c) for c in xs[p]), tuple(int(c) for c in vs[p])

    def graph(self, u: int) -> SignedDigraph:
        return SignedDigraph.from_signs(self.unique_signs[u])

    def graphs(self):
        """Distinct local graphs, in order of first occurrence in X'."""
        for u in np.argsort(self.first_index, kind="stable"):
            yield self.graph(int(u))


def local_scan(net: Network, thresholded: bool = True) -> LocalScan:
    key = ("scan", thresholded)
    cached = net._cache.get(key)
    if cached is not None:
        return cached
    n = net.n
    thr, unthr = local_sign_arrays(net)
    signs = thr if thresholded else unthr
    flat = signs.reshape(len(signs), n * n)
    uniq, first, inverse = np.unique(flat, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    if n > MAX_VERTICES:
        raise CapExceeded(f"{n} coordinates; circuit enumeration is capped at {MAX_VERTICES}")
    uniq = uniq.reshape(-1, n, n)
    analyses = _support_masks(uniq)
    on_pos = np.zeros((len(uniq), n), dtype=bool)
    for u, supp in enumerate(analyses):
        covered = 0
        for mask in supp:
            covered |= mask
        for v in range(n):
            on_pos[u, v] = covered >> v & 1

    _, xs, vs = net.domain.xprime_arrays()
    first_graph: dict[int, int] = {}
    for u in np.argsort(first, kind="stable"):
        for mask in analyses[u]:
            first_graph.setdefault(mask, int(u))
    witnesses: dict = {}
    for mask, u in first_graph.items():
        p = int(first[u])
        support = frozenset(v + 1 for v in range(n) if mask >> v & 1)
        x = tuple(int(c) for c in xs[p])
        v = tuple(int(c) for c in vs[p])
        witnesses[support] = Witness(x, v, _circuit(uniq[u], mask))
    witnesses = dict(sorted(witnesses.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))))

    flagged = on_pos[inverse]  # (P, n)
    doubled_all = 2 * xs + vs
    doubled = tuple(
        tuple(int(d) for d in np.unique(doubled_all[flagged[:, i], i])) for i in range(n)
    )
    thresholds = ThresholdSet(doubled)
    family = CircuitFamily(n, witnesses, doubled)
    scan = LocalScan(net, thresholded, signs, uniq, first, inverse, analyses, on_pos, family, thresholds)
    net._cache[key] = scan
    return scan


def global_graph(net: Network, thresholded: bool = True) -> SignedDigraph:
    """Union of the local graphs over every admissible pair."""
    thr, unthr = local_sign_arrays(net)
    signs = thr if thresholded else unthr
    n = net.n
    edges = set()
    for s in (-1, 1):
        present = (signs == s).any(axis=0)
        for i, j in np.argwhere(present):
            edges.add((int(j) + 1, s, int(i) + 1))
    return SignedDigraph(n, frozenset(edges))


def threshold_sets(net: Network, thresholded: bool = True) -> ThresholdSet:
    return local_scan(net, thresholded).thresholds


def threshold_partition(domain: IntervalDomain, i: int, doubled: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal sub-intervals of X_i containing no threshold, as ``(min, max)`` pairs."""
    lo, hi = domain.lower[i - 1], domain.upper[i - 1]
    blocks = []
    start = lo
    for d in sorted(doubled):
        # threshold d/2 sits between (d-1)/2 and (d+1)/2
        cut = (d - 1) // 2
        if lo <= cut < hi:
            blocks.append((start, cut))
            start = cut + 1
    blocks.append((start, hi))
    return blocks
