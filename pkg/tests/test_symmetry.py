import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from greedybase.errors import CapExceeded
from greedybase.oracle import partition_tuple_stabiliser
from greedybase.partitions.arrays import IntersectionTensor, intersection_tensor, random_partition, theta
from greedybase.partitions.symmetry import (
    array_symmetries,
    canonical_form,
    equivalent,
    factorial_product,
    fixes,
    stab_order,
)


def brute_k_order(A: IntersectionTensor) -> int:
    k, t = A.k, A.t
    perms = list(itertools.permutations(range(k)))
    return sum(1 for g in itertools.product(perms, repeat=t) if fixes(A, g))


def test_constant_array_full_symmetry():
    for k in range(2, 6):
        assert array_symmetries(np.full((k, k), 3)).order == math.factorial(k) ** 2


def test_k2_rule():
    assert array_symmetries([[5, 5], [5, 5]]).order == 4
    assert array_symmetries([[6, 4], [4, 6]]).order == 2


def test_stab_order_examples():
    assert stab_order([[6, 4], [4, 6]]) == 2 * (720 * 24) ** 2
    assert stab_order([[5, 5], [5, 5]]) == 4 * math.factorial(5) ** 4
    # l*I at k = 2: only the simultaneous swap fixes it
    for l in (2, 3, 5):
        assert stab_order([[l, 0], [0, l]]) == 2 * math.factorial(l) ** 2


def test_l_identity_matches_oracle():
    from greedybase.partitions.arrays import realize2

    A, B = realize2([[3, 0], [0, 3]])
    assert len(partition_tuple_stabiliser(6, [A.parts, B.parts])) == stab_order([[3, 0], [0, 3]]) == 72


def test_elements_fix_and_count():
    A = theta([2, 1, 0, 0])
    K = array_symmetries(A)
    els = list(K.elements())
    assert len(els) == K.order == len(set(els))
    assert all(fixes(A, g) for g in els)
    js = K.to_json()
    assert js["complete"] and js["order"] == K.order


def test_guard_refuses_large_k():
    with pytest.raises(CapExceeded):
        array_symmetries(np.ones((8, 8), dtype=int))
    with pytest.raises(CapExceeded):
        array_symmetries(np.ones((6, 6, 6), dtype=int))


def test_canonical_form_invariance():
    A = IntersectionTensor([[4, 5, 6], [5, 5, 5], [6, 5, 4]])
    B = IntersectionTensor(A.entries[[2, 0, 1]][:, [1, 2, 0]].T)
    assert canonical_form(A) == canonical_form(B)
    assert equivalent(A, B)
    js = canonical_form(A).to_json()
    assert js["multiset"] == sorted(A.entries.ravel().tolist())


def test_canonical_form_needs_2array():
    with pytest.raises(ValueError):
        canonical_form(np.ones((2, 2, 2), dtype=int))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(1, 4), st.sampled_from([2, 3]), st.randoms(use_true_random=False))
def test_k_order_matches_brute_force(k, l, t, rng):
    if t == 3 and k > 3:
        k = 3
    A = intersection_tensor([random_partition(k, l, rng) for _ in range(t)])
    assert array_symmetries(A).order == brute_k_order(A)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.integers(1, 5), st.sampled_from([2, 3]), st.randoms(use_true_random=False))
def test_stab_order_matches_oracle(k, l, t, rng):
    while k * l > 10:
        l -= 1
    Ps = [random_partition(k, l, rng) for _ in range(t)]
    A = intersection_tensor(Ps)
    assert stab_order(A) == len(partition_tuple_stabiliser(k * l, [p.parts for p in Ps]))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 7), st.data())
def test_theta_has_k_symmetries(k, data):
    v = data.draw(st.lists(st.integers(0, 6), min_size=k, max_size=k))
    order = array_symmetries(theta(v)).order
    assert order >= k and order % k == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(2, 6), st.randoms(use_true_random=False))
def test_equivalence_implies_equal_orders(k, l, rng):
    A = intersection_tensor([random_partition(k, l, rng) for _ in range(2)])
    rows, cols = list(range(k)), list(range(k))
    rng.shuffle(rows)
    rng.shuffle(cols)
    B = IntersectionTensor(A.entries[rows][:, cols])
    assert equivalent(A, B)
    assert stab_order(A) == stab_order(B)
    assert factorial_product(A) == factorial_product(B)
