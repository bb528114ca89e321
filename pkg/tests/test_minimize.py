import math

import pytest
from hypothesis import given, settings, strategies as st

from greedybase.partitions import named
from greedybase.partitions.arrays import IntersectionTensor
from greedybase.partitions.minimize import (
    MultiplicitySeq,
    all_multiplicity_seqs,
    brute_min_factorial_product,
    flat_min,
    min_2array,
    min_3array,
    min_factorial_product,
    multisets,
)
from greedybase.partitions.symmetry import canonical_form, stab_order


def test_worked_example():
    res = min_factorial_product(10, 4, [(1, 5)])
    assert res.value == 480
    assert res.witness == (1, 2, 2, 5)
    assert res.b == 2 and res.x == pytest.approx(5 / 3)


def test_empty_sequence_is_equal_parts():
    for q, t in [(3, 4), (5, 2), (1, 6)]:
        assert min_factorial_product(q * t, t).value == math.factorial(q) ** t
        assert flat_min(q * t, t) == math.factorial(q) ** t


def test_invalid_sequences_are_named():
    with pytest.raises(ValueError, match="multiplicities"):
        MultiplicitySeq(10, 4, [(0, 5)])
    with pytest.raises(ValueError, match="sum of multiplicities"):
        MultiplicitySeq(10, 4, [(4, 5)])
    with pytest.raises(ValueError, match="strictly"):
        MultiplicitySeq(10, 4, [(1, 3)])
    with pytest.raises(ValueError, match="different s, t"):
        min_factorial_product(9, 4, MultiplicitySeq(10, 4, [(1, 5)]))


def test_admits():
    X = MultiplicitySeq(10, 4, [(1, 5)])
    assert X.admits((5, 2, 2, 1)) and X.admits((6, 2, 1, 1))
    assert not X.admits((4, 2, 2, 2))
    low = MultiplicitySeq(12, 4, [(1, 1)])
    assert low.admits((1, 3, 4, 4)) and not low.admits((3, 3, 3, 3))


def test_multisets_count():
    # partitions of 6 into at most 3 parts
    assert len(list(multisets(6, 3))) == 7


def test_closed_form_matches_brute_force_everywhere():
    cases = 0
    for s in range(0, 13):
        for t in range(1, 6):
            for X in all_multiplicity_seqs(s, t):
                best, args = brute_min_factorial_product(s, t, X)
                res = min_factorial_product(s, t, X)
                assert res.value == best and args == [res.witness], (s, t, X)
                cases += 1
    assert cases > 400


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 40), st.integers(1, 8))
def test_flat_min_is_a_lower_bound(s, t):
    res = min_factorial_product(s, t)
    assert res.value == flat_min(s, t)
    assert sum(res.witness) == s and len(res.witness) == t
    assert max(res.witness) - min(res.witness) <= 1


def test_min_2array_k2():
    for l in range(10, 21):
        res = min_2array(2, l)
        assert res.complete
        want = canonical_form(named.k2(l))
        assert [c.key for c in res.classes] == [want.key]
        assert res.value == stab_order(named.k2(l))


def test_min_2array_small_brute():
    # k = 2: a 2 x 2 array with margins l is fixed by its corner entry
    for l in range(1, 9):
        vals = [stab_order([[a, l - a], [l - a, a]]) for a in range(l + 1)]
        assert min_2array(2, l).value == min(vals)


def test_min_2array_budget():
    res = min_2array(4, 20, budget=5)
    assert not res.complete and "budget" in res.note


def test_min_3array_k2():
    N = named.k2(10)
    res = min_3array(N)
    assert res.value <= stab_order(named.k2_W(10))
    assert all(W.k == 2 and W.t == 3 for W in res.classes)
    with pytest.raises(ValueError):
        min_3array(IntersectionTensor([[1, 1, 1]] * 3))
