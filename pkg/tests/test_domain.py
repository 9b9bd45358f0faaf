import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_states, brute_xprime, domains
from ddsbound import IntervalDomain, enumerate_states, enumerate_xprime
from ddsbound.domain import admissible_directions
from ddsbound.errors import DomainError, DomainSizeError, SingletonIntervalError, StateError


def test_enumerates_boolean_square_in_rank_order():
    assert list(enumerate_states(IntervalDomain.boolean(2))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerates_single_interval():
    assert list(enumerate_states(IntervalDomain((0,), (2,)))) == [(0,), (1,), (2,)]


def test_offset_box_cardinality_and_ends():
    states = list(enumerate_states(IntervalDomain((1, 0), (2, 2))))
    assert len(states) == 6
    assert states[0] == (1, 0)
    assert states[-1] == (2, 2)


def test_enumeration_can_resume():
    dom = IntervalDomain.from_sizes((3, 2))
    assert list(enumerate_states(dom, start=4)) == [(2, 0), (2, 1)]


def test_xprime_on_boolean_line():
    assert list(enumerate_xprime(IntervalDomain.boolean(1))) == [((0,), (1,)), ((1,), (-1,))]


def test_xprime_on_boolean_cube_has_one_direction_per_state():
    dom = IntervalDomain.boolean(3)
    pairs = list(enumerate_xprime(dom))
    assert len(pairs) == 8
    assert len({x for x, _ in pairs}) == 8


def test_xprime_interior_point_admits_both_signs():
    pairs = list(enumerate_xprime(IntervalDomain((0,), (2,))))
    assert pairs == [((0,), (1,)), ((1,), (-1,)), ((1,), (1,)), ((2,), (-1,))]


def test_rank_and_unrank_examples():
    assert IntervalDomain.boolean(2).rank((0, 1)) == 1
    assert IntervalDomain((0,), (2,)).unrank(2) == (2,)
    assert IntervalDomain((0, 0), (2, 1)).rank((2, 0)) == 4


def test_singleton_interval_is_rejected_with_its_own_error():
    with pytest.raises(SingletonIntervalError):
        IntervalDomain((0, 3), (1, 3))


def test_empty_interval_is_rejected():
    with pytest.raises(DomainError):
        IntervalDomain((2,), (1,))


def test_cardinality_must_fit_64_bits():
    with pytest.raises(DomainSizeError):
        IntervalDomain.from_sizes((2,) * 64)
    assert IntervalDomain.from_sizes((2,) * 63).cardinality == 2**63


def test_out_of_domain_state_and_index():
    dom = IntervalDomain.boolean(2)
    with pytest.raises(StateError):
        dom.rank((0, 2))
    with pytest.raises(StateError):
        dom.unrank(4)


def test_admissible_directions_at_corner_and_interior():
    dom = IntervalDomain.from_sizes((3, 2))
    assert list(admissible_directions(dom, (1, 0))) == [(-1, 1), (1, 1)]


@given(domains(max_n=6, max_size=4, max_states=512))
def test_rank_unrank_are_inverse(dom):
    for k in range(dom.cardinality):
        assert dom.rank(dom.unrank(k)) == k
    for x in brute_states(dom):
        assert dom.unrank(dom.rank(x)) == x


@given(domains(max_n=5, max_size=4, max_states=256))
def test_enumeration_matches_product_order(dom):
    assert list(enumerate_states(dom)) == brute_states(dom)


@given(domains(max_n=4, max_size=4, max_states=128))
def test_xprime_matches_brute_force(dom):
    assert list(enumerate_xprime(dom)) == brute_xprime(dom)
    # |X'| = prod over i of 2 (|X_i| - 1)
    expected = 1
    for size in dom.sizes:
        expected *= 2 * (size - 1)
    assert len(brute_xprime(dom)) == expected


@given(domains(max_n=4, max_size=5, max_states=256), st.data())
def test_xprime_arrays_agree_with_enumeration(dom, data):
    ranks, xs, vs = dom.xprime_arrays()
    pairs = list(enumerate_xprime(dom))
    p = data.draw(st.integers(0, len(pairs) - 1))
    x, v = pairs[p]
    assert tuple(xs[p]) == x and tuple(vs[p]) == v and ranks[p] == dom.rank(x)
