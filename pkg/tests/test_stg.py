import pytest
from hypothesis import given

from conftest import brute_attractors, networks
from ddsbound import attractors, attractors_oracle, build_stg, is_trap_domain
from ddsbound.errors import CapExceeded, DDSError
from ddsbound.stg import attractor_states, strongly_connected_components


def _edges(net):
    dom = net.domain
    return {(dom.unrank(k), dom.unrank(m)) for k, m in build_stg(net).edges()}


def test_negation_cycle(neg):
    assert _edges(neg) == {((0,), (1,)), ((1,), (0,))}


def test_identity_has_no_edges(id2):
    assert _edges(id2) == set()


def test_copy_edges(copy):
    assert _edges(copy) == {
        ((0, 1), (1, 1)),
        ((0, 1), (0, 0)),
        ((1, 0), (0, 0)),
        ((1, 0), (1, 1)),
    }


def test_trap_domains(neg, copy):
    assert is_trap_domain(build_stg(neg), [(0,), (1,)])
    assert not is_trap_domain(build_stg(neg), [(0,)])
    assert is_trap_domain(build_stg(copy), [(0, 0)])


def test_empty_set_is_not_a_trap_domain(neg):
    with pytest.raises(DDSError):
        is_trap_domain(build_stg(neg), [])


def test_attractor_examples(neg, id2, copy, id3):
    assert attractors(build_stg(neg)) == [frozenset({0, 1})]
    assert attractors(build_stg(id2)) == [frozenset({k}) for k in range(4)]
    g = build_stg(copy)
    assert [attractor_states(g, a) for a in attractors(g)] == [[(0, 0)], [(1, 1)]]
    assert attractors_oracle(build_stg(id3)) == [frozenset({0}), frozenset({1}), frozenset({2})]
    assert attractors_oracle(build_stg(neg)) == [frozenset({0, 1})]
    assert attractors_oracle(g) == attractors(g)


def test_oracle_refuses_large_graphs(id3):
    with pytest.raises(CapExceeded):
        attractors_oracle(build_stg(id3), limit=2)


def test_transition_moves_one_coordinate_one_step():
    from ddsbound import IntervalDomain, Network

    net = Network.from_function(IntervalDomain.from_sizes((4, 3)), lambda x: (3 - x[0], 2))
    dom = net.domain
    for k, m in build_stg(net).edges():
        x, y = dom.unrank(k), dom.unrank(m)
        diff = [b - a for a, b in zip(x, y)]
        assert sorted(abs(d) for d in diff) == [0, 1]


@given(networks(max_n=3, max_size=3, max_states=27))
def test_tarjan_matches_brute_force(net):
    dom = net.domain
    found = {frozenset(dom.unrank(k) for k in a) for a in attractors(build_stg(net))}
    assert found == brute_attractors(net)


@given(networks(max_n=4, max_size=4, max_states=256))
def test_tarjan_matches_forward_closure_oracle(net):
    g = build_stg(net)
    assert attractors(g) == attractors_oracle(g)


@given(networks(max_n=4, max_size=4, max_states=128))
def test_components_partition_the_states(net):
    comps = strongly_connected_components(build_stg(net))
    members = sorted(v for c in comps for v in c)
    assert members == list(range(net.domain.cardinality))


@given(networks(max_n=3, max_size=4, max_states=64))
def test_attractors_are_trap_domains(net):
    g = build_stg(net)
    for a in attractors(g):
        assert is_trap_domain(g, a)
