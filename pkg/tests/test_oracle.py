import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from greedybase.errors import CapExceeded
from greedybase.oracle import (
    ExplicitGroup,
    PartitionAction,
    Perm,
    SubsetAction,
    alternating_group,
    exhaustive_greedy,
    min_base_size,
    orbits_on,
    partition_tuple_stabiliser,
    pointwise_stabiliser,
    set_partition_stabiliser,
    symmetric_group,
)

P1 = [[1, 2], [3, 4], [5, 6]]
P2 = [[6, 1], [2, 3], [4, 5]]


def test_symmetric_and_alternating_orders():
    for n in range(1, 8):
        assert symmetric_group(n).order == math.factorial(n)
        if n >= 2:
            assert alternating_group(n).order == math.factorial(n) // 2


def test_groups_are_closed():
    assert symmetric_group(4).is_closed()
    assert alternating_group(5).is_closed()
    assert set_partition_stabiliser(6, P1).is_closed()


def test_group_cap_refuses():
    with pytest.raises(CapExceeded):
        symmetric_group(11)


def test_perm_rejects_non_bijection():
    with pytest.raises(ValueError):
        Perm((1, 1, 2))


def test_s4_on_pairs_is_transitive():
    orbs = orbits_on(symmetric_group(4), SubsetAction(4, 2))
    assert [len(o) for o in orbs] == [6]


def test_wreath_stabiliser_orbits_on_partitions():
    G = set_partition_stabiliser(6, P1)
    assert G.order == 48
    orbs = orbits_on(G, PartitionAction(3, 2))
    assert sum(len(o) for o in orbs) == 15
    assert sorted(len(o) for o in orbs) == [1, 6, 8]


def test_empty_pointwise_stabiliser_is_whole_group():
    G = symmetric_group(5)
    assert pointwise_stabiliser(G, SubsetAction(5, 2), []).order == 120


def test_dihedral_pair_and_trivial_triple():
    G = symmetric_group(6)
    act = PartitionAction(3, 2)
    H = pointwise_stabiliser(G, act, [P1, P2])
    assert H.order == 6
    assert H.is_closed()
    assert len(partition_tuple_stabiliser(6, [P1, P2])) == 6


def test_l2_greedy_values():
    act = PartitionAction(3, 2)
    assert exhaustive_greedy(symmetric_group(6), act).max_size == 4
    assert exhaustive_greedy(alternating_group(6), act).max_size == 3


@pytest.mark.parametrize("n", range(3, 8))
def test_natural_action_greedy(n):
    act = SubsetAction(n, 1)
    assert exhaustive_greedy(symmetric_group(n), act).max_size == n - 1
    if n >= 4:
        assert exhaustive_greedy(alternating_group(n), act).max_size == n - 2


@pytest.mark.parametrize("n", range(3, 7))
def test_min_base_natural_action(n):
    assert min_base_size(symmetric_group(n), SubsetAction(n, 1)) == n - 1


def test_min_base_of_l2_sym_is_four():
    # three partitions never suffice at k = 3, l = 2
    assert min_base_size(symmetric_group(6), PartitionAction(3, 2)) == 4


@pytest.mark.parametrize("n,r", [(5, 2), (6, 2), (6, 3), (7, 2), (7, 3)])
def test_greedy_minimum_bounds_base_size(n, r):
    for G in (symmetric_group(n), alternating_group(n)):
        act = SubsetAction(n, r)
        res = exhaustive_greedy(G, act)
        b = min_base_size(G, act)
        assert res.min_size >= b
        assert b >= math.log(G.order) / math.log(len(act.points)) - 1e-9


def test_all_points_branching_agrees():
    G, act = symmetric_group(5), SubsetAction(5, 2)
    a, b = exhaustive_greedy(G, act), exhaustive_greedy(G, act, all_points=True)
    assert (a.max_size, a.min_size) == (b.max_size, b.min_size)
    assert b.runs >= a.runs


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 7), st.integers(1, 3), st.data())
def test_orbit_stabiliser(n, r, data):
    r = min(r, n - 1)
    G = symmetric_group(n)
    act = SubsetAction(n, r)
    chosen = data.draw(st.lists(st.sampled_from(act.points), max_size=3))
    H = pointwise_stabiliser(G, act, chosen)
    assert G.order % H.order == 0
    orbs = orbits_on(H, act)
    assert sum(len(o) for o in orbs) == len(act.points)
    for o in orbs:
        assert H.order % len(o) == 0
        assert pointwise_stabiliser(H, act, [o[0]]).order * len(o) == H.order


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(1, 9)), st.sampled_from([(2, 4), (4, 2)]))
def test_tuple_stabiliser_matches_filtered_group(perm, kl):
    k, l = kl
    P = [sorted(perm[i * l:(i + 1) * l]) for i in range(k)]
    Q = [list(range(i * l + 1, (i + 1) * l + 1)) for i in range(k)]
    G = set_partition_stabiliser(8, P)
    act = PartitionAction(k, l)
    H = pointwise_stabiliser(G, act, [Q])
    assert len(partition_tuple_stabiliser(8, [P, Q])) == H.order


def test_tuple_stabiliser_cap():
    with pytest.raises(CapExceeded):
        partition_tuple_stabiliser(8, [[list(range(1, 9))]], cap=100)


def test_explicit_group_roundtrip_perms():
    G = symmetric_group(3)
    again = ExplicitGroup.from_perms(G.perms(), 3)
    assert np.array_equal(G.elements, again.elements)
