"""Acceptance suite: one test per criterion.

Each test tags itself with its criterion number, a title and the pinned
tolerance; conftest prints a PASS/FAIL line per criterion at the end of the
session.  Criteria that do not hold are left failing.
"""

import math
import time

import pytest

from greedybase.experiments.commands import cmd_ravenous_table, l2_partitions
from greedybase.experiments.table import partition_count, sweep
from greedybase.experiments.verify import (
    verify_lemma_key,
    verify_logfacts,
    verify_matchar,
    verify_minN,
    verify_named,
    verify_oracle,
    verify_section2,
    verify_theta,
)
from greedybase.oracle import (
    PartitionAction,
    alternating_group,
    exhaustive_greedy,
    partition_tuple_stabiliser,
    symmetric_group,
)
from greedybase.partitions import named
from greedybase.partitions.minimize import min_2array
from greedybase.partitions.symmetry import canonical_form
from greedybase.subsets import ALT, SYM, greedy_run, max_greedy_size


@pytest.fixture
def criterion(record_property):
    def tag(num, title, tolerance):
        record_property("criterion", num)
        record_property("title", title)
        record_property("tolerance", tolerance)

    return tag


def _failures(rep):
    return [c.name for c in rep.checks if not c.passed]


def test_c01_l2_k3_greedy(criterion):
    criterion(1, "G(S_3x2) = 4 and G(A_3x2) = 3 by exhaustive oracle", "exact, runtime < 1 s")
    t0 = time.perf_counter()
    act = PartitionAction(3, 2)
    sym, alt = symmetric_group(6), alternating_group(6)
    assert len(act.points) == 15 and sym.order == 720
    got = (exhaustive_greedy(sym, act).max_size, exhaustive_greedy(alt, act).max_size)
    elapsed = time.perf_counter() - t0
    assert got == (4, 3)
    assert elapsed < 1.0


def test_c02_l2_k4_alt_greedy(criterion):
    criterion(2, "G(A_4x2) = 3 by exhaustive oracle", "exact, runtime < 60 s")
    t0 = time.perf_counter()
    act = PartitionAction(4, 2)
    assert len(act.points) == 105
    G = alternating_group(8)
    assert G.order * 2 == 40320
    got = exhaustive_greedy(G, act).max_size
    assert got == 3
    assert time.perf_counter() - t0 < 60


def test_c03_l2_explicit_partitions(criterion):
    criterion(3, "k=3, l=2: (P1,P2) stabiliser has order 6, adding P3 gives the trivial group", "exact")
    P = l2_partitions(3)
    pair = len(partition_tuple_stabiliser(6, [P["P1"], P["P2"]]))
    triple = len(partition_tuple_stabiliser(6, [P["P1"], P["P2"], P["P3"]]))
    assert pair == 6
    # at k = 3 the triple keeps an involution; b(S_3x2) = 4 so no triple can be a base
    assert triple == 1, f"stabiliser of (P1, P2, P3) has order {triple}"


def test_c04_a16_2(criterion):
    criterion(4, "A_16,2: G = 10, every greedy base of size 10, 10 <= 17, ratio <= 17/10", "exact")
    res = max_greedy_size(16, 2, ALT)
    assert res.exact
    assert res.value == 10 and res.min_value == 10
    assert res.value <= 2 * 16 // 2 + 1 == 17
    assert res.value * 10 <= 17 * 10


def test_c05_subset_bound_sweep(criterion):
    criterion(5, "r in {2,3}, 4r^2 <= n <= 40: greedy sizes <= 2n/r+1 and section-2 diagnostics pass", "exact")
    bad = []
    for r in (2, 3):
        for n in range(4 * r * r, 41):
            bound = 2 * n // r + 1
            for g in (SYM, ALT):
                res = max_greedy_size(n, r, g)
                det = greedy_run(n, r, g).size
                if not res.exact or res.value > bound or det > bound:
                    bad.append((n, r, g, det, res.value))
    assert bad == []
    assert _failures(verify_section2()) == []


def test_c06_min_2arrays(criterion):
    criterion(6, "min_2array(2, l) for 10 <= l <= 20 and min_2array(3, 3q) for q in {5,6,7} give the stated classes", "exact set equality up to ~")
    wrong = []
    for l in range(10, 21):
        res = min_2array(2, l)
        if not res.complete or [c.key for c in res.classes] != [canonical_form(named.k2(l)).key]:
            wrong.append(("k=2", l))
    for q in (5, 6, 7):
        res = min_2array(3, 3 * q)
        if not res.complete or [c.key for c in res.classes] != [canonical_form(named.k3(q)).key]:
            wrong.append(("k=3", q, [c.representative for c in res.classes]))
    assert wrong == []


def test_c07_min_factorial_product(criterion):
    criterion(7, "closed-form factorial minimum equals brute force for s <= 12, t <= 5", "exact")
    assert _failures(verify_minN(s_max=12, t_max=5)) == []


def test_c08_realisation_and_stab_order(criterion):
    criterion(8, "realize2/realize3 round trips on 1000 margins; stab_order matches oracle on 100 tuples (kl <= 10)", "exact")
    assert _failures(verify_matchar(cases=1000)) == []
    assert _failures(verify_oracle(cases=100)) == []


def test_c09_named_k_orders(criterion):
    criterion(9, "|K| = 1 for the named arrays; |K_theta(v)| >= k on 100 random v", "exact")
    assert _failures(verify_named()) == []
    assert _failures(verify_theta(cases=100)) == []


def test_c10_key_continuation(criterion):
    criterion(10, "continuation reaches a base in ceil(log_k max) steps (Alt one fewer at most); oracle cross-check kl <= 10", "exact")
    rep = verify_lemma_key(cases=50)
    assert _failures(rep) == []


def test_c11_ravenous_table(criterion):
    criterion(11, "table sweep max ratio <= 11 and (6,60) value <= 11", "ratio <= 11")
    rows = sweep()
    assert max(r.ratio for r in rows) <= 11
    generic = math.log2(math.log2(partition_count(6, 60))) + 1
    assert generic == pytest.approx(10.815, abs=1e-3)
    assert generic <= 11
    assert _failures(cmd_ravenous_table()) == []


def test_c12_logfacts(criterion):
    criterion(12, "logfacts identity for 7 <= k <= 50, q <= 10^4", "exact")
    assert _failures(verify_logfacts(k_max=50, q_max=10**4)) == []
