import random
import warnings
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from greedybase import subsets as sub
from greedybase.oracle import SubsetAction, exhaustive_greedy, orbits_on, pointwise_stabiliser, symmetric_group, alternating_group
from greedybase.subsets import (
    ALT,
    SYM,
    CellState,
    GreedyDiagnostics,
    PolicyError,
    check_section2_lemmas,
    count_orbit_size,
    greedy_run,
    is_base,
    make_rset,
    max_greedy_size,
    meta_greedy_candidates,
    orbit_size,
)


def test_make_rset_validation():
    assert make_rset([3, 1], 4, 2) == (1, 3)
    with pytest.raises(ValueError):
        make_rset([1, 1], 4, 2)
    with pytest.raises(ValueError):
        make_rset([0, 2], 4, 2)


def test_is_base_examples():
    assert not is_base(CellState.initial(4, 2), SYM)
    assert is_base(CellState.from_chosen(4, 2, [(1, 2), (1, 3), (1, 4)]), SYM)
    assert not is_base(CellState.from_chosen(4, 2, [(1, 2)]), ALT)
    # one cell of size two is fine for Alt
    assert is_base(CellState.from_chosen(4, 2, [(1, 2), (1, 3)]), ALT)


def test_orbit_size_examples():
    st0 = CellState.initial(7, 3)
    assert orbit_size((1, 2, 3), st0) == comb(7, 3)
    st1 = CellState.from_chosen(6, 2, [(1, 2)])
    assert orbit_size((1, 3), st1) == 8


def test_candidates_examples():
    assert meta_greedy_candidates(CellState.initial(6, 2)) == {(((), 2),)}
    st1 = CellState.from_chosen(6, 2, [(1, 2)])
    cands = meta_greedy_candidates(st1)
    # the first point comes from the size-4 cell
    for c in cands:
        assert dict(c).get((), 0) >= 1


def test_natural_action_runs():
    assert greedy_run(5, 1, SYM).size == 4
    assert greedy_run(5, 1, ALT).size == 3
    assert max_greedy_size(5, 1, SYM).value == 4


def test_a16_2_every_greedy_base_has_size_10():
    res = max_greedy_size(16, 2, ALT)
    assert res.exact
    assert res.value == 10 and res.min_value == 10


def test_s16_2_within_bound():
    res = max_greedy_size(16, 2, SYM)
    assert res.exact and res.value <= 17


def test_budget_exhaustion_is_flagged():
    res = max_greedy_size(30, 3, SYM, budget=3)
    assert not res.exact and res.min_value is None


def test_methods_agree():
    for n, r in [(9, 2), (12, 2), (12, 3), (16, 2)]:
        for g in (SYM, ALT):
            a = max_greedy_size(n, r, g)
            b = max_greedy_size(n, r, g, method="metagreedy")
            assert (a.value, a.min_value) == (b.value, b.min_value)


def test_policy_errors_name_the_step():
    with pytest.raises(PolicyError) as err:
        greedy_run(6, 2, SYM, policy=[0, 99])
    assert err.value.step == 2
    with pytest.raises(PolicyError):
        greedy_run(6, 2, SYM, policy=[0])


def test_degenerate_input_warns():
    with pytest.warns(UserWarning):
        greedy_run(4, 2, SYM)


def test_diagnostics_disjoint_prefix():
    trace = greedy_run(16, 2, SYM)
    assert trace.s >= 6
    es = [s.e for s in trace.steps]
    assert es == sorted(es, reverse=True)
    Fs = [set(s.F) for s in trace.steps]
    assert all(a <= b for a, b in zip(Fs, Fs[1:]))


def test_section2_checks_pass_on_named_runs():
    for n, r in [(16, 2), (36, 3)]:
        report = check_section2_lemmas(greedy_run(n, r, SYM))
        assert report.passed and report.skipped is None, report.to_json()


def test_section2_checks_skip_outside_range():
    assert check_section2_lemmas(greedy_run(10, 2, SYM)).skipped


def test_section2_checker_reports_u_violation():
    # a hand-built sequence where the singly covered residues jump
    n, r = 16, 2
    base = [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (1, 3), (5, 7), (9, 11), (2, 4), (6, 8), (10, 12), (13, 14), (13, 15)]
    s, steps = sub.diagnose(base, n, r)
    states = [CellState.from_chosen(n, r, base[:i]) for i in range(len(base) + 1)]
    trace = GreedyDiagnostics(n, r, SYM, tuple(base), s, steps, tuple(states))
    report = check_section2_lemmas(trace)
    assert not report.passed
    assert any(v.check == "u-monotone" and v.step == 14 for v in report.violations)


def test_alt_stops_same_step_or_one_earlier():
    rng = random.Random(4)
    for _ in range(20):
        n = rng.randint(9, 24)
        r = rng.choice([2, 3])
        s = greedy_run(n, r, SYM, policy=None)
        a = greedy_run(n, r, ALT, policy=None)
        assert s.base[: a.size] == a.base
        assert a.size in (s.size, s.size - 1)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_bound_compliance(r):
    for n in range(4 * r * r, 4 * r * r + 6):
        for g in (SYM, ALT):
            assert max_greedy_size(n, r, g).value <= 2 * n // r + 1


def test_cellstate_json_roundtrip():
    st1 = CellState.from_chosen(7, 3, [(1, 2, 3), (3, 4, 5)])
    assert CellState.from_json(st1.to_json()) == st1


# -- oracle equivalence ------------------------------------------------------

GROUPS = {n: symmetric_group(n) for n in range(4, 9)}


@settings(max_examples=200, deadline=None)
@given(st.integers(4, 8), st.sampled_from([2, 3]), st.data())
def test_cells_match_oracle(n, r, data):
    pts = list(range(1, n + 1))
    chosen = data.draw(st.lists(st.lists(st.sampled_from(pts), min_size=r, max_size=r, unique=True), max_size=4))
    state = CellState.from_chosen(n, r, chosen)
    act = SubsetAction(n, r)
    H = pointwise_stabiliser(GROUPS[n], act, chosen)
    assert state.stabiliser_order() == H.order
    # orbit sizes of every r-set agree
    for orbit in orbits_on(H, act):
        assert orbit_size(tuple(sorted(orbit[0])), state) == len(orbit)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 10), st.sampled_from([2, 3]), st.data())
def test_count_vectors_sum_to_binomial(n, r, data):
    pts = list(range(1, n + 1))
    chosen = data.draw(st.lists(st.lists(st.sampled_from(pts), min_size=r, max_size=r, unique=True), max_size=4))
    state = CellState.from_chosen(n, r, chosen)
    total = 0

    def rec(i, left, acc):
        nonlocal total
        if i == len(state.cells):
            total += acc if left == 0 else 0
            return
        for c in range(min(left, state.cells[i].size) + 1):
            rec(i + 1, left - c, acc * comb(state.cells[i].size, c))

    rec(0, r, 1)
    assert total == comb(n, r)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 12), st.sampled_from([2, 3]), st.randoms(use_true_random=False))
def test_runs_refine_and_shrink(n, r, rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = greedy_run(n, r, SYM, rng)
    orders = [s.stabiliser_order() for s in trace.states]
    assert all(a > b for a, b in zip(orders, orders[1:]))
    for before, after in zip(trace.states, trace.states[1:]):
        # every new cell lies inside an old cell
        old = [set(c.members) for c in before.cells]
        assert all(any(set(c.members) <= o for o in old) for c in after.cells)


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 12), st.sampled_from([2, 3]), st.randoms(use_true_random=False))
def test_candidates_are_largest_orbits(n, r, rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = greedy_run(n, r, SYM, rng)
    for state in trace.states[:-1]:
        best = max(orbit_size(a, state) for a in SubsetAction(n, r).points)
        for cand in meta_greedy_candidates(state):
            assert count_orbit_size(cand, state) == best


@pytest.mark.parametrize("n,r", [(6, 2), (7, 2), (7, 3), (8, 2), (8, 3)])
def test_max_greedy_size_matches_oracle(n, r):
    act = SubsetAction(n, r)
    assert max_greedy_size(n, r, SYM).value == exhaustive_greedy(GROUPS[n], act).max_size
    assert max_greedy_size(n, r, ALT).value == exhaustive_greedy(alternating_group(n), act).max_size
