"""Shared fixtures, strategies and brute-force oracles."""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ddsbound import IntervalDomain, Network
from ddsbound.graphs import SignedDigraph

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("repo")


# -- named example networks ---------------------------------------------------

def f_neg() -> Network:
    return Network.from_function(IntervalDomain.boolean(1), lambda x: (1 - x[0],))


def f_id2() -> Network:
    return Network.from_function(IntervalDomain.boolean(2), lambda x: x)


def f_id3() -> Network:
    return Network.from_function(IntervalDomain((0,), (2,)), lambda x: x)


def f_copy() -> Network:
    return Network.from_function(IntervalDomain.boolean(2), lambda x: (x[1], x[0]))


def f_thr() -> Network:
    return Network(IntervalDomain((0,), (2,)), np.array([[1], [2], [2]]))


@pytest.fixture
def neg():
    return f_neg()


@pytest.fixture
def id2():
    return f_id2()


@pytest.fixture
def id3():
    return f_id3()


@pytest.fixture
def copy():
    return f_copy()


@pytest.fixture
def thr():
    return f_thr()


# -- strategies ----------------------------------------------------------------

@st.composite
def domains(draw, max_n=4, max_size=4, max_states=256, boolean=False):
    n = draw(st.integers(1, max_n))
    lower, upper = [], []
    total = 1
    for _ in range(n):
        size = 2 if boolean else draw(st.integers(2, max_size))
        if total * size > max_states:
            size = 2
        total *= size
        lo = 0 if boolean else draw(st.integers(-2, 2))
        lower.append(lo)
        upper.append(lo + size - 1)
    return IntervalDomain(tuple(lower), tuple(upper))


@st.composite
def networks(draw, **kw):
    dom = draw(domains(**kw))
    cols = [
        draw(st.lists(st.integers(a, b), min_size=dom.cardinality, max_size=dom.cardinality))
        for a, b in zip(dom.lower, dom.upper)
    ]
    return Network(dom, np.array(cols, dtype=np.int64).T.reshape(dom.cardinality, dom.n))


@st.composite
def signed_digraphs(draw, max_n=6, dual=True):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), max_size=n * n, unique=True))
    edges = set()
    for j, i in pairs:
        choice = draw(st.sampled_from(((1,), (-1,), (1, -1)) if dual else ((1,), (-1,))))
        for s in choice:
            edges.add((j, s, i))
    return SignedDigraph(n, frozenset(edges))


# -- oracles ---------------------------------------------------------------------

def brute_states(dom: IntervalDomain):
    return list(itertools.product(*(range(a, b + 1) for a, b in zip(dom.lower, dom.upper))))


def brute_local_graph(net: Network, x, v, thresholded=True) -> set:
    """Edges straight from the definitions, with exact fractions."""
    n = net.n
    fx = net(x)
    edges = set()
    for j in range(n):
        y = list(x)
        y[j] += v[j]
        fy = net(y)
        for i in range(n):
            d = Fraction(fy[i] - fx[i], v[j])
            if d == 0:
                continue
            t = Fraction(x[i]) + Fraction(v[i], 2)
            if thresholded and not (min(fx[i], fy[i]) < t < max(fx[i], fy[i])):
                continue
            edges.add((j + 1, 1 if d > 0 else -1, i + 1))
    return edges


def brute_xprime(dom: IntervalDomain):
    out = []
    for x in brute_states(dom):
        for v in itertools.product((-1, 1), repeat=dom.n):
            if dom.contains(tuple(a + b for a, b in zip(x, v))):
                out.append((x, v))
    return out


def brute_attractors(net: Network) -> set[frozenset]:
    """Minimal trap domains by closure under successors (state tuples)."""
    dom = net.domain
    states = brute_states(dom)

    def succ(x):
        fx = net(x)
        out = []
        for i in range(dom.n):
            if fx[i] != x[i]:
                y = list(x)
                y[i] += 1 if fx[i] > x[i] else -1
                out.append(tuple(y))
        return out

    reach = {}
    for x in states:
        seen = {x}
        todo = [x]
        while todo:
            for y in succ(todo.pop()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        reach[x] = frozenset(seen)
    return {r for r in reach.values() if all(reach[y] == r for y in r)}


def nx_positive_supports(g: SignedDigraph) -> set[frozenset]:
    """Positive-circuit supports through networkx cycle enumeration."""
    h = nx.DiGraph()
    h.add_nodes_from(range(1, g.n + 1))
    signs = {}
    for j, s, i in g.edges:
        h.add_edge(j, i)
        signs.setdefault((j, i), set()).add(s)
    out = set()
    for cyc in nx.simple_cycles(h):
        pairs = [(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))]
        for choice in itertools.product(*(sorted(signs[p]) for p in pairs)):
            if sum(s < 0 for s in choice) % 2 == 0:
                out.add(frozenset(cyc))
                break
    return out


def brute_min_hitting(supports, n, weight=lambda I: len(I)):
    best = None
    for size in range(n + 1):
        for combo in itertools.combinations(range(1, n + 1), size):
            if all(set(combo) & s for s in supports):
                key = (weight(combo), len(combo), combo)
                if best is None or key < best:
                    best = key
    return best
