"""Signed elementary circuits and positive feedback vertex sets.

Circuits are found with Johnson's algorithm on the underlying simple
digraph. Each vertex cycle is then expanded into its signed variants, one
per choice of sign on edges that carry both signs, so a pair of opposite
parallel edges yields two distinct circuits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, DDSError, StateError
from .graphs import Edge, SignedDigraph

MAX_VERTICES = 24
MAX_CIRCUITS = 10**6


@dataclass(frozen=True)
class SignedCircuit:
    """Edges ``(j, s, i)`` of an elementary circuit, rotated to start at its smallest vertex."""

    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        if not edges:
            raise DDSError("a circuit has at least one edge")
        r = len(edges)
        for k in range(r):
            if edges[k][2] != edges[(k + 1) % r][0]:
                raise DDSError(f"edges {edges[k]} and {edges[(k + 1) % r]} do not chain")
        starts = [e[0] for e in edges]
        if len(set(starts)) != r:
            raise DDSError("circuit is not elementary")
        k0 = starts.index(min(starts))
        object.__setattr__(self, "edges", edges[k0:] + edges[:k0])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(e[0] for e in self.edges)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def sign(self) -> int:
        return -1 if sum(e[1] < 0 for e in self.edges) % 2 else 1

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return " ".join(f"{j} {'+' if s > 0 else '-'}>" for j, s, _ in self.edges) + f" {self.edges[0][0]}"


def is_positive(c: SignedCircuit) -> bool:
    return c.sign > 0


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _closure(start: int, adj: Sequence[int], within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def vertex_cycles(n: int, succ: Sequence[int]) -> Iterator[list[int]]:
    """Johnson's algorithm over successor bitmasks; 0-based vertex lists.

    Each cycle is produced once, starting from its smallest vertex.
    """
    pred = [0] * n
    for v in range(n):
        for w in _bits(succ[v]):
            pred[w] |= 1 << v
    for s in range(n):
        ge = ~((1 << s) - 1)
        # strongly connected component of s among vertices >= s
        comp = _closure(s, succ, ge) & _closure(s, pred, ge)
        if comp == 1 << s:
            if succ[s] >> s & 1:
                yield [s]
            continue
        nbrs = {v: list(_bits(succ[v] & comp)) for v in _bits(comp)}
        blocked = 1 << s
        block_map = {v: 0 for v in nbrs}
        path = [s]
        stack = [iter(nbrs[s])]
        closed = [False]
        while stack:
            for w in stack[-1]:
                if w == s:
                    yield list(path)
                    closed[-1] = True
                elif not blocked >> w & 1:
                    path.append(w)
                    closed.append(False)
                    stack.append(iter(nbrs[w]))
                    blocked |= 1 << w
                    break
            else:
                stack.pop()
                v = path.pop()
                if closed.pop():
                    if closed:
                        closed[-1] = True
                    pending = [v]
                    while pending:
                        u = pending.pop()
                        if blocked >> u & 1:
                            blocked &= ~(1 << u)
                            pending.extend(_bits(block_map[u]))
                            block_map[u] = 0
                else:
                    for w in nbrs[v]:
                        block_map[w] |= 1 << v


def _check_size(g: SignedDigraph, max_vertices: int):
    if g.n > max_vertices:
        raise CapExceeded(f"graph has {g.n} vertices; circuit enumeration is capped at {max_vertices}")


def _cycle_signs(g: SignedDigraph, cyc: list[int]) -> list[tuple[int, ...]]:
    sm = g.sign_map
    return [sm[(cyc[k], cyc[(k + 1) % len(cyc)])] for k in range(len(cyc))]


def _has_positive_variant(signs: list[tuple[int, ...]]) -> bool:
    # an edge carrying both signs lets the parity be chosen freely
    parity = 0
    for ss in signs:
        if len(ss) > 1:
            return True
        parity ^= ss[0] < 0
    return parity == 0


def _first_positive_variant(cyc: list[int], signs: list[tuple[int, ...]]) -> SignedCircuit:
    for choice in itertools.product(*signs):
        if sum(s < 0 for s in choice) % 2 == 0:
            r = len(cyc)
            return SignedCircuit(tuple((cyc[k] + 1, choice[k], cyc[(k + 1) % r] + 1) for k in range(r)))
    raise AssertionError("cycle has no positive variant")


def elementary_circuits(
    g: SignedDigraph, max_vertices: int = MAX_VERTICES, max_circuits: int = MAX_CIRCUITS
) -> list[SignedCircuit]:
    """All signed elementary circuits of ``g``, each once up to rotation.

    Raises :class:`CapExceeded` rather than truncating.
    """
    _check_size(g, max_vertices)
    out = []
    for cyc in vertex_cycles(g.n, g.succ_masks):
        r = len(cyc)
        for choice in itertools.product(*_cycle_signs(g, cyc)):
            out.append(SignedCircuit(tuple((cyc[k] + 1, choice[k], cyc[(k + 1) % r] + 1) for k in range(r))))
            if len(out) > max_circuits:
                raise CapExceeded(f"more than {max_circuits} circuits")
    out.sort(key=lambda c: (len(c), c.vertices, tuple(e[1] for e in c.edges)))
    return out


def has_positive_circuit(g: SignedDigraph, max_vertices: int = MAX_VERTICES, max_circuits: int = MAX_CIRCUITS) -> bool:
    _check_size(g, max_vertices)
    for count, cyc in enumerate(vertex_cycles(g.n, g.succ_masks)):
        if count >= max_circuits:
            raise CapExceeded(f"more than {max_circuits} circuits")
        if _has_positive_variant(_cycle_signs(g, cyc)):
            return True
    return False


def positive_supports(
    g: SignedDigraph, max_vertices: int = MAX_VERTICES, max_circuits: int = MAX_CIRCUITS
) -> dict[frozenset[int], SignedCircuit]:
    """Vertex sets of the positive circuits of ``g``, each with one witness circuit."""
    _check_size(g, max_vertices)
    out: dict[frozenset[int], SignedCircuit] = {}
    for count, cyc in enumerate(vertex_cycles(g.n, g.succ_masks)):
        if count >= max_circuits:
            raise CapExceeded(f"more than {max_circuits} circuits")
        signs = _cycle_signs(g, cyc)
        if _has_positive_variant(signs):
            key = frozenset(v + 1 for v in cyc)
            if key not in out:
                out[key] = _first_positive_variant(cyc, signs)
    return dict(sorted(out.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))))


TABLE_MAX_VERTICES = 10


def support_table(pos: np.ndarray, neg: np.ndarray) -> np.ndarray:
    """Positive-circuit supports of a batch of graphs by dynamic programming.

    ``pos[u, v, w]`` / ``neg[u, v, w]`` flag a positive / negative edge
    v -> w (0-based) in graph u. Returns ``table`` of shape ``(2**n, U)``
    with ``table[S, u]`` true iff graph u has a positive elementary circuit
    whose vertex set is exactly the bitmask S.

    ``reach[S, u, v]`` holds bit 1 (resp. 2) when graph u has an elementary
    path from min(S) through exactly S to v with an even (resp. odd)
    number of negative edges.
    """
    pos = np.asarray(pos, dtype=bool)
    neg = np.asarray(neg, dtype=bool)
    count, n, _ = pos.shape
    if n > TABLE_MAX_VERTICES:
        raise CapExceeded(f"{n} vertices; the support table is capped at {TABLE_MAX_VERTICES}")
    weights = (np.int64(1) << np.arange(n, dtype=np.int64))
    pos_rows = (pos * weights).sum(axis=2)  # (U, n): successor bitmask of v
    neg_rows = (neg * weights).sum(axis=2)
    reach = np.zeros((1 << n, count, n), dtype=np.uint8)
    for v in range(n):
        reach[1 << v, :, v] = 1
    table = np.zeros((1 << n, count), dtype=bool)
    zero = np.zeros((), dtype=np.int64)
    for mask in range(1, 1 << n):
        r = reach[mask]
        if not r.any():
            continue
        start = (mask & -mask).bit_length() - 1
        even = (r & 1).astype(bool)
        odd = (r & 2).astype(bool)
        to_even = np.bitwise_or.reduce(np.where(even, pos_rows, zero) | np.where(odd, neg_rows, zero), axis=1)
        to_odd = np.bitwise_or.reduce(np.where(odd, pos_rows, zero) | np.where(even, neg_rows, zero), axis=1)
        table[mask] = (to_even >> start) & 1
        for w in range(start + 1, n):
            if not mask >> w & 1:
                reach[mask | 1 << w, :, w] |= (((to_even >> w) & 1) | (((to_odd >> w) & 1) << 1)).astype(np.uint8)
    return table


def positive_support_sets(g: SignedDigraph, **caps) -> list[frozenset[int]]:
    """Vertex sets of the positive circuits of ``g``, smallest first."""
    if g.n > TABLE_MAX_VERTICES:
        return list(positive_supports(g, **caps))
    pos = np.zeros((1, g.n, g.n), dtype=bool)
    neg = np.zeros_like(pos)
    for j, sign, i in g.edges:
        (pos if sign > 0 else neg)[0, j - 1, i - 1] = True
    masks = np.nonzero(support_table(pos, neg)[:, 0])[0]
    out = [frozenset(v + 1 for v in _bits(int(m))) for m in masks]
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def positive_cycle_on(succ: Sequence[int], neg: Sequence[int], mask: int) -> list[int] | None:
    """First positive elementary cycle with vertex set exactly ``mask``, single-sign graphs.

    ``succ[v]`` / ``neg[v]`` are bitmasks of all / negative successors of v.
    """
    n = len(succ)
    restricted = [succ[v] & mask if mask >> v & 1 else 0 for v in range(n)]
    for cyc in vertex_cycles(n, restricted):
        if len(cyc) != bin(mask).count("1"):
            continue
        r = len(cyc)
        if not sum(neg[cyc[k]] >> cyc[(k + 1) % r] & 1 for k in range(r)) % 2:
            return cyc
    return None


def is_pfvs(g: SignedDigraph, vertices, **caps) -> bool:
    """True iff deleting ``vertices`` leaves no positive circuit."""
    vertices = set(vertices)
    if not vertices <= set(range(1, g.n + 1)):
        raise StateError(f"vertex set {sorted(vertices)} is not inside 1..{g.n}")
    return not has_positive_circuit(g.without(vertices), **caps)


def covers_positive_circuits(g: SignedDigraph, vertices, **caps) -> bool:
    """Direct form of the PFVS test: every positive circuit meets ``vertices``."""
    vertices = set(vertices)
    return all(vertices & set(c.vertices) for c in elementary_circuits(g, **caps) if is_positive(c))


# -- exact minimum-weight hitting set ----------------------------------------

def _minimal_sets(sets: list[int]) -> list[int]:
    keep: list[int] = []
    for s in sorted(set(sets), key=lambda m: (bin(m).count("1"), m)):
        if not any(k & s == k for k in keep):
            keep.append(s)
    return keep


def min_hitting_set(
    supports: Sequence[frozenset[int]] | Sequence[set[int]],
    n: int,
    weights: Mapping[int, int] | Sequence[int] | None = None,
    product: bool = False,
) -> frozenset[int]:
    """Minimum-cost set of vertices (1..n) meeting every support.

    Cost is the sum of weights, or their product with ``product=True``
    (weights must then be >= 2). Ties go to the smaller set, then to the
    lexicographically smaller sorted vertex list. Branch and bound: branch
    on an unhit support, bound by pairwise disjoint unhit supports.
    """
    if weights is None:
        w = [1] * n
    elif isinstance(weights, Mapping):
        w = [int(weights.get(v, 1)) for v in range(1, n + 1)]
    else:
        w = [int(x) for x in weights]
    if len(w) != n or any(x < 1 for x in w) or (product and any(x < 2 for x in w)):
        raise DDSError("weights must be positive (>= 2 for products), one per vertex")
    masks = [sum(1 << (v - 1) for v in s) for s in supports]
    if any(m == 0 for m in masks):
        raise DDSError("cannot hit an empty support")
    masks = _minimal_sets(masks)
    if not masks:
        return frozenset()

    def combine(cost, x):
        return cost * x if product else cost + x

    def key(cost, chosen):
        verts = tuple(v + 1 for v in _bits(chosen))
        return (cost, len(verts), verts)

    best: list = [None, None]  # key, mask

    def lower_bound(cost, chosen, forbidden, unhit):
        used = 0
        for m in unhit:
            free = m & ~forbidden
            if free & used:
                continue
            cost = combine(cost, min(w[v] for v in _bits(free)))
            used |= free
        return cost

    def search(cost, chosen, forbidden):
        unhit = [m for m in masks if not m & chosen]
        if not unhit:
            k = key(cost, chosen)
            if best[0] is None or k < best[0]:
                best[0], best[1] = k, chosen
            return
        for m in unhit:
            if not m & ~forbidden:
                return
        if best[0] is not None and lower_bound(cost, chosen, forbidden, unhit) > best[0][0]:
            return
        target = min(unhit, key=lambda m: bin(m & ~forbidden).count("1"))
        excluded = forbidden
        for v in _bits(target & ~forbidden):
            search(combine(cost, w[v]), chosen | 1 << v, excluded)
            excluded |= 1 << v

    search(1 if product else 0, 0, 0)
    return frozenset(v + 1 for v in _bits(best[1]))


def minimum_pfvs(g: SignedDigraph, weights=None, product: bool = False, **caps) -> frozenset[int]:
    """Minimum-weight positive feedback vertex set of ``g``."""
    return min_hitting_set(positive_support_sets(g, **caps), g.n, weights, product)


def minimal_pfvs_sets(g: SignedDigraph, **caps) -> list[frozenset[int]]:
    """All inclusion-minimal positive feedback vertex sets (small graphs only)."""
    supports = [set(s) for s in positive_support_sets(g, **caps)]
    found: list[frozenset[int]] = []
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(1, g.n + 1), size):
            c = set(combo)
            if any(f <= c for f in found):
                continue
            if all(c & s for s in supports):
                found.append(frozenset(c))
    return found


# -- families of local graphs ------------------------------------------------

@dataclass(frozen=True)
class Witness:
    state: tuple[int, ...]
    direction: tuple[int, ...]
    circuit: SignedCircuit

    def to_dict(self) -> dict:
        return {
            "x": list(self.state),
            "v": list(self.direction),
            "edges": [list(e) for e in self.circuit.edges],
        }


@dataclass(frozen=True)
class CircuitFamily:
    """Supports of positive circuits found in the local graphs, with witnesses.

    ``thresholds_doubled[i - 1]`` holds ``2 * t`` for every threshold ``t``
    contributed to coordinate ``i`` during the same scan.
    """

    n: int
    witnesses: Mapping[frozenset[int], Witness]
    thresholds_doubled: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def supports(self) -> list[frozenset[int]]:
        return list(self.witnesses)

    def __len__(self):
        return len(self.witnesses)

    def __bool__(self):
        return bool(self.witnesses)

    def to_dict(self) -> list[dict]:
        return [
            {"support": sorted(s), "witness": w.to_dict()} for s, w in self.witnesses.items()
        ]


def functional_positive_circuits(net, thresholded: bool = True) -> CircuitFamily:
    """Positive circuits that occur in some local graph of ``net``."""
    from .interaction import local_scan

    scan = local_scan(net, thresholded)
    return scan.family


def minimum_pfvs_family(fam: CircuitFamily, weights=None, product: bool = False) -> frozenset[int]:
    """Minimum-weight set meeting every support of the family."""
    return min_hitting_set(fam.supports, fam.n, weights, product)
