import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from greedybase.errors import CapExceeded, HypothesisError
from greedybase.oracle import PartitionAction, exhaustive_greedy, partition_tuple_stabiliser, pointwise_stabiliser, set_partition_stabiliser
from greedybase.partitions import named
from greedybase.partitions.arrays import KLPartition, intersection_tensor, random_partition
from greedybase.partitions.keylemma import (
    KeyState,
    ceil_log,
    lemma_key_check,
    lemma_key_continue,
    lemma_key_iterate,
    logfacts_check,
    logfacts_sweep,
    random_trivstab_instance,
    split_sizes,
    trivstab_conditions,
    trivstab_construct,
)


def test_ceil_log():
    assert [ceil_log(2, x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    assert ceil_log(3, 5) == 2 and ceil_log(10, 1000) == 3
    with pytest.raises(ValueError):
        ceil_log(1, 5)


def test_split_sizes():
    assert split_sizes(Counter({5: 3}), 3) == Counter({2: 6, 1: 3})
    assert split_sizes(Counter({1: 4}), 2) == Counter({1: 4})


def test_size_recursion_k3_max5():
    run = lemma_key_iterate(KeyState(3, Counter({5: 3, 4: 3, 3: 3})))
    assert run.predicted == 2 and run.sym_steps == 2 and run.ok
    assert run.maxima == [5, 2, 1]


def test_check_rejects_symmetric_state():
    P = KLPartition(((1, 2, 3), (4, 5, 6)))
    verdict = lemma_key_check([P, P])
    assert not verdict.holds and verdict.k_order == 2
    with pytest.raises(HypothesisError):
        lemma_key_iterate(KeyState.from_partitions([P, P]))


def test_check_needs_multiplicity():
    with pytest.raises(HypothesisError) as err:
        lemma_key_continue(KeyState(2, Counter({4: 4})))
    assert err.value.failed == "multiplicity"


def test_k2_w_witness():
    for l in (10, 14, 18):
        W = named.k2_W(l)
        v = lemma_key_check(W)
        assert v.holds and v.k_order == 1
        assert W.counts()[v.witness] >= 2


def _states(rng, shapes, count):
    out = []
    while len(out) < count:
        k, l, m = rng.choice(shapes)
        Ps = [random_partition(k, l, rng) for _ in range(m)]
        if intersection_tensor(Ps).entries.max() >= 2 and lemma_key_check(Ps).holds:
            out.append(Ps)
    return out


def test_explicit_iteration_matches_recursion():
    rng = random.Random(7)
    for Ps in _states(rng, [(2, 8, 3), (3, 6, 2), (3, 9, 2), (4, 6, 2)], 20):
        run = lemma_key_iterate(KeyState.from_partitions(Ps))
        assert run.ok
        final = run.partitions
        assert len(partition_tuple_stabiliser(final[0].n, [p.parts for p in final])) == 1


def test_continuation_matches_oracle_greedy():
    rng = random.Random(3)
    acts = {}
    for Ps in _states(rng, [(2, 4, 3), (3, 3, 3), (2, 3, 3)], 6):
        k, l = Ps[0].k, Ps[0].l
        run = lemma_key_iterate(KeyState.from_partitions(Ps))
        act = acts.setdefault((k, l), PartitionAction(k, l))
        H = pointwise_stabiliser(set_partition_stabiliser(k * l, Ps[0].parts), act, [p.as_point() for p in Ps[1:]])
        assert exhaustive_greedy(H, act).max_size == run.predicted
        alt = exhaustive_greedy(H.even_part(), act).max_size
        assert run.predicted - 1 <= alt <= run.predicted


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.dictionaries(st.integers(1, 200), st.integers(1, 12), min_size=1, max_size=5))
def test_size_iteration_properties(k, sizes):
    sizes = Counter(sizes)
    state = KeyState(k, sizes)
    run = lemma_key_iterate(state) if any(t % k and m >= k for t, m in sizes.items()) else None
    if run is None:
        return
    assert run.sym_steps == run.predicted == ceil_log(k, max(sizes))
    assert run.sym_steps - 1 <= run.alt_steps <= run.sym_steps


def test_trivstab_construction():
    rng = random.Random(11)
    for _ in range(5):
        P, Q = random_trivstab_instance(7, 3, rng)
        res = trivstab_construct(P, Q)
        assert res.fixed_points >= 2
        assert len(partition_tuple_stabiliser(21, [P.parts, Q.parts, res.T.parts])) == 1


def test_trivstab_rejects_large_stabiliser():
    P = KLPartition(tuple(tuple(range(3 * i + 1, 3 * i + 4)) for i in range(7)))
    cond = trivstab_conditions(P, P)
    assert "entries" in cond["failed"]
    with pytest.raises(HypothesisError):
        trivstab_construct(P, P)


def test_trivstab_k8_hits_guard():
    with pytest.raises(CapExceeded):
        random_trivstab_instance(8, 3, random.Random(0), tries=50)


def test_logfacts():
    assert logfacts_check(7, 49) and logfacts_check(7, 47)
    with pytest.raises(HypothesisError):
        logfacts_check(6, 12)
    assert logfacts_sweep(range(7, 12), 2000) == []
