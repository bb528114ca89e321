"""Property suites behind ``greedybase verify <id>``.

Every suite is deterministic given its seed and returns a :class:`RunReport`
whose checks carry the first few counterexamples when they fail.
"""

from __future__ import annotations

import random
from math import comb

import numpy as np

from greedybase import subsets as sub
from greedybase.errors import CapExceeded, HypothesisError
from greedybase.experiments.commands import _timed, l2_partitions, subset_bound
from greedybase.experiments.report import RunReport
from greedybase.oracle import (
    PartitionAction,
    SubsetAction,
    exhaustive_greedy,
    is_even,
    orbits_on,
    partition_tuple_stabiliser,
    pointwise_stabiliser,
    set_partition_stabiliser,
    symmetric_group,
)
from greedybase.partitions import named
from greedybase.partitions.arrays import (
    KLPartition,
    intersection_tensor,
    random_margin_matrix,
    random_partition,
    random_split,
    realize2,
    realize3,
    theta,
)
from greedybase.partitions.keylemma import (
    KeyState,
    lemma_key_check,
    lemma_key_iterate,
    logfacts_sweep,
    random_trivstab_instance,
    trivstab_conditions,
    trivstab_construct,
)
from greedybase.partitions.minimize import all_multiplicity_seqs, brute_min_factorial_product, min_factorial_product
from greedybase.partitions.symmetry import array_symmetries, stab_order

MAX_EXAMPLES = 5


def _record(rep: RunReport, name: str, bad: list, total: int):
    rep.add(f"{name}: cases", total)
    rep.check(name, not bad, detail=f"{len(bad)} failures")
    if bad:
        rep.data.setdefault("counterexamples", {})[name] = bad[:MAX_EXAMPLES]


# ---------------------------------------------------------------------------


def _state_key(state: sub.CellState):
    return tuple((c.signature, c.size) for c in state.cells)


def _best_count_orbit(state: sub.CellState) -> int:
    best = 0
    cells = state.cells

    def rec(i, left, acc):
        nonlocal best
        if i == len(cells):
            if left == 0:
                best = max(best, acc)
            return
        for c in range(min(left, cells[i].size) + 1):
            rec(i + 1, left - c, acc * comb(cells[i].size, c))

    rec(0, state.r, 1)
    return best


def verify_metagreedy(seed: int = 0, n_max: int = 12) -> RunReport:
    rep = RunReport("verify", {"id": "metagreedy-optimality", "n_max": n_max}, seed=seed)
    bad, total = [], 0
    for r in (1, 2, 3):
        for n in range(r + 2, n_max + 1):
            seen = set()
            frontier = [sub.CellState.initial(n, r, explicit=False)]
            while frontier:
                nxt = []
                for st in frontier:
                    key = _state_key(st)
                    if key in seen or sub.is_base(st):
                        continue
                    seen.add(key)
                    best = _best_count_orbit(st)
                    for cand in sub.meta_greedy_candidates(st):
                        total += 1
                        got = sub.count_orbit_size(cand, st)
                        if got != best:
                            bad.append({"n": n, "r": r, "state": key, "candidate": cand, "orbit": got, "best": best})
                        nxt.append(st.apply(cand))
                frontier = nxt
    _record(rep, "candidates attain the largest orbit", bad, total)
    return rep


def verify_section2(seed: int = 0, n_max: int = 40, runs: int = 5) -> RunReport:
    rep = RunReport("verify", {"id": "section2-lemmas", "n_max": n_max, "runs": runs}, seed=seed)
    rng = random.Random(seed)
    bad, total, size_bad = [], 0, []
    for r in (2, 3):
        for n in range(4 * r * r, n_max + 1):
            for group in sub.GROUPS:
                traces = [sub.greedy_run(n, r, group)] + [sub.greedy_run(n, r, group, rng) for _ in range(runs)]
                for trace in traces:
                    total += 1
                    lemma = sub.check_section2_lemmas(trace)
                    if not lemma.passed:
                        bad.append({"n": n, "r": r, "group": group, "violations": [v.to_json() for v in lemma.violations]})
                    if trace.size > subset_bound(n, r):
                        size_bad.append({"n": n, "r": r, "group": group, "size": trace.size})
    _record(rep, "lemma checks on every run", bad, total)
    _record(rep, "run sizes within 2n/r+1", size_bad, total)
    return rep


def verify_matchar(seed: int = 0, cases: int = 1000) -> RunReport:
    rep = RunReport("verify", {"id": "matchar-roundtrip", "cases": cases}, seed=seed)
    rng = random.Random(seed)
    bad2, bad3 = [], []
    for _ in range(cases):
        k, l = rng.randint(2, 6), rng.randint(1, 8)
        N = random_margin_matrix(k, l, rng)
        P, Q = realize2(N)
        if intersection_tensor([P, Q]) != N:
            bad2.append(N.tolist())
        W = random_split(N, rng)
        T = realize3(W, P, Q)
        if intersection_tensor([P, Q, T]) != W:
            bad3.append(W.tolist())
    _record(rep, "realize2 round trip", bad2, cases)
    _record(rep, "realize3 round trip", bad3, cases)
    return rep


def verify_minN(seed: int = 0, s_max: int = 12, t_max: int = 5) -> RunReport:
    rep = RunReport("verify", {"id": "minN", "s_max": s_max, "t_max": t_max}, seed=seed)
    bad, total = [], 0
    for s in range(1, s_max + 1):
        for t in range(1, t_max + 1):
            for X in all_multiplicity_seqs(s, t):
                total += 1
                closed = min_factorial_product(s, t, X)
                brute, witnesses = brute_min_factorial_product(s, t, X)
                if closed.value != brute or list(witnesses) != [closed.witness]:
                    bad.append({"s": s, "t": t, "X": list(X.pairs), "closed": closed.value, "brute": brute})
    _record(rep, "closed form equals brute force", bad, total)
    return rep


def verify_theta(seed: int = 0, cases: int = 100) -> RunReport:
    rep = RunReport("verify", {"id": "theta", "cases": cases}, seed=seed)
    rng = random.Random(seed)
    bad = []
    for _ in range(cases):
        k = rng.randint(2, 7)
        v = [rng.randint(0, 6) for _ in range(k)]
        order = array_symmetries(theta(v)).order
        if order < k or order % k:
            bad.append({"v": v, "order": order})
    _record(rep, "|K_theta(v)| is a positive multiple of k", bad, cases)
    return rep


NAMED_CASES = [
    ("k2", {"l": l}) for l in (10, 11, 12, 13, 20)
] + [
    ("k2_W", {"l": l}) for l in (10, 11, 12, 14, 15, 16, 18, 19)
] + [
    ("k3", {"q": q}) for q in (5, 6, 7, 9)
] + [
    ("k3_W", {"q": q}) for q in (7, 10)
] + [
    ("other3", {"k": k, "q": q, "eps": e}) for k in (3, 4) for q in (5, 6) for e in (1, -1)
] + [
    ("L", {"k": k, "q": q}) for k in (4, 5, 6) for q in (2, 11)
] + [
    ("theta_E", {"k": k, "q": q, "r": r}) for k in (6, 7) for q in (1, 3) for r in (3, k - 3)
] + [
    ("theta_pm_E", {"k": k, "q": q, "r": r}) for k in (4, 5, 6) for q in (4, 6) for r in sorted({2, k - 2})
] + [
    ("block_L", {"k": k, "q": q}) for k in (5, 6) for q in (11, 12)
] + [
    ("theta_rX", {"k": k, "q": 7, "r": r}) for k in (5, 6) for r in (1, -1)
] + [
    ("k5_A", {"q": 7, "r": r}) for r in (1, -1)
]


def verify_named(seed: int = 0) -> RunReport:
    rep = RunReport("verify", {"id": "named-K"}, seed=seed)
    bad_margin, bad_set, bad_k = [], [], []
    for family, params in NAMED_CASES:
        A = named.named_arrays(family, **params)
        tag = {"family": family, **params}
        if A.margin_violation():
            bad_margin.append({**tag, "why": A.margin_violation()})
        want = named.expected_multiset(family, **params)
        if want is not None and A.counts() != want:
            bad_set.append({**tag, "got": dict(A.counts()), "want": dict(want)})
        kw = named.expected_k_order(family, **params)
        if kw is not None:
            got = array_symmetries(A).order
            if got != kw:
                bad_k.append({**tag, "got": got, "want": kw})
    _record(rep, "valid margins", bad_margin, len(NAMED_CASES))
    _record(rep, "entry multisets as stated", bad_set, len(NAMED_CASES))
    _record(rep, "|K| as stated", bad_k, len(NAMED_CASES))
    return rep


def verify_logfacts(seed: int = 0, k_max: int = 50, q_max: int = 10**4) -> RunReport:
    rep = RunReport("verify", {"id": "logfacts", "k_max": k_max, "q_max": q_max}, seed=seed)
    bad = logfacts_sweep(range(7, k_max + 1), q_max)
    _record(rep, "identity over the sweep", [list(b) for b in bad], (k_max - 6) * q_max * 5)
    return rep


KEY_SHAPES = [(2, 8, 3), (2, 12, 3), (3, 6, 2), (3, 9, 2), (3, 12, 2), (4, 6, 2), (4, 10, 2), (5, 5, 2), (3, 20, 2)]
ORACLE_SHAPES = [(2, 4, 3), (2, 5, 3), (3, 3, 3), (2, 3, 3)]


def key_states(rng: random.Random, count: int, shapes=KEY_SHAPES, min_max: int = 2) -> list[list[KLPartition]]:
    """Random partition tuples satisfying the continuation hypotheses."""
    out = []
    for _ in range(200 * count):
        if len(out) == count:
            break
        k, l, m = rng.choice(shapes)
        Ps = [random_partition(k, l, rng) for _ in range(m)]
        if intersection_tensor(Ps).entries.max() < min_max:
            continue
        if lemma_key_check(Ps).holds:
            out.append(Ps)
    return out


def verify_lemma_key(seed: int = 0, cases: int = 50, oracle_cases: int = 15) -> RunReport:
    rep = RunReport("verify", {"id": "lemma-key", "cases": cases, "oracle_cases": oracle_cases}, seed=seed)
    rng = random.Random(seed)
    bad = []
    states = key_states(rng, cases)
    for Ps in states:
        run = lemma_key_iterate(KeyState.from_partitions(Ps))
        if not run.ok:
            bad.append({"partitions": [p.to_json() for p in Ps], **run.to_json()})
    _record(rep, "steps equal ceil(log_k max), Alt within one", bad, len(states))
    if len(states) < cases:
        rep.notes.append(f"only {len(states)} of {cases} hypothesis-satisfying states drawn")
    obad = []
    acts: dict = {}
    small = key_states(rng, oracle_cases, ORACLE_SHAPES)
    for Ps in small:
        k, l = Ps[0].k, Ps[0].l
        run = lemma_key_iterate(KeyState.from_partitions(Ps))
        act = acts.setdefault((k, l), PartitionAction(k, l))
        H = pointwise_stabiliser(set_partition_stabiliser(k * l, Ps[0].parts), act, [p.as_point() for p in Ps[1:]])
        gs = exhaustive_greedy(H, act).max_size
        ga = exhaustive_greedy(H.even_part(), act).max_size
        if gs != run.predicted or not run.predicted - 1 <= ga <= gs:
            obad.append({"partitions": [p.to_json() for p in Ps], "predicted": run.predicted, "sym": gs, "alt": ga})
    _record(rep, "oracle greedy continuation agrees", obad, len(small))
    return rep


def verify_trivstab(seed: int = 0, cases: int = 10, k: int = 7, l: int = 3) -> RunReport:
    rep = RunReport("verify", {"id": "trivstab", "cases": cases, "k": k, "l": l}, seed=seed)
    rng = random.Random(seed)
    bad, fix_bad = [], []
    for _ in range(cases):
        P, Q = random_trivstab_instance(k, l, rng)
        res = trivstab_construct(P, Q)
        stab = partition_tuple_stabiliser(k * l, [P.parts, Q.parts, res.T.parts])
        if len(stab) != 1:
            bad.append({"P": P.to_json(), "Q": Q.to_json(), "T": res.T.to_json(), "order": len(stab)})
        if res.fixed_points < 2:
            fix_bad.append({"P": P.to_json(), "Q": Q.to_json(), "fixed": res.fixed_points})
    _record(rep, "three-point stabiliser trivial (oracle)", bad, cases)
    _record(rep, "at least two fixed points", fix_bad, cases)
    # negative: a pair with trivial K must be refused, naming (i)
    while True:
        P, Q = random_partition(k, l, rng), random_partition(k, l, rng)
        cond = trivstab_conditions(P, Q)
        if cond.get("k_order") == 1:
            break
    try:
        trivstab_construct(P, Q)
        refused = None
    except HypothesisError as exc:
        refused = exc.failed
    rep.check("trivial K refused naming (i)", refused is not None and "(i)" in refused, detail=str(refused))
    return rep


def verify_oracle(seed: int = 0, cases: int = 100) -> RunReport:
    rep = RunReport("verify", {"id": "oracle-consistency", "cases": cases}, seed=seed)
    rng = random.Random(seed)
    # subsets: cell products against explicit pointwise stabilisers
    groups = {n: symmetric_group(n) for n in range(4, 9)}
    bad_sub, bad_orbit = [], []
    for _ in range(cases):
        n = rng.randint(4, 8)
        r = rng.choice([x for x in (2, 3) if x < n])
        act = SubsetAction(n, r)
        chosen = [tuple(sorted(rng.sample(range(1, n + 1), r))) for _ in range(rng.randint(0, 4))]
        state = sub.CellState.from_chosen(n, r, chosen)
        H = pointwise_stabiliser(groups[n], act, [frozenset(a) for a in chosen])
        if state.stabiliser_order() != H.order:
            bad_sub.append({"n": n, "r": r, "chosen": chosen, "cells": state.stabiliser_order(), "oracle": H.order})
        sizes = {min(o, key=sorted): len(o) for o in orbits_on(H, act)}
        for rep_pt, size in sizes.items():
            if sub.orbit_size(tuple(sorted(rep_pt)), state) != size:
                bad_orbit.append({"n": n, "r": r, "chosen": chosen, "alpha": sorted(rep_pt)})
                break
    _record(rep, "cell stabiliser order equals oracle", bad_sub, cases)
    _record(rep, "orbit sizes equal oracle", bad_orbit, cases)
    # partitions: stab_order against explicit stabilisers
    bad_part = []
    for _ in range(cases):
        k = rng.randint(2, 5)
        l = rng.randint(1, 10 // k)
        t = rng.choice([2, 3])
        Ps = [random_partition(k, l, rng) for _ in range(t)]
        want = len(partition_tuple_stabiliser(k * l, [p.parts for p in Ps]))
        got = stab_order(intersection_tensor(Ps))
        if got != want:
            bad_part.append({"partitions": [p.to_json() for p in Ps], "stab_order": got, "oracle": want})
    _record(rep, "stab_order equals oracle", bad_part, cases)
    # the explicit l = 2 partitions
    for k in range(3, 8):
        w = l2_partitions(k)
        rep.expect(f"k={k}: dihedral pair of order 2k", len(partition_tuple_stabiliser(2 * k, [w["P1"], w["P2"]])), 2 * k)
        if k >= 4:
            third = partition_tuple_stabiliser(2 * k, [w["P1"], w["P2"], w["P3"]])
            rep.expect(f"k={k}: third partition gives the trivial group", len(third), 1)
        if k >= 5:
            alt = partition_tuple_stabiliser(2 * k, [w["Q1"], w["Q2"], w["Q3"]])
            even = int(is_even(np.array(alt) - 1).sum())
            rep.expect(f"k={k}: alternating triple gives the trivial group", even, 1)
    return rep


VERIFIERS = {
    "metagreedy-optimality": verify_metagreedy,
    "section2-lemmas": verify_section2,
    "matchar-roundtrip": verify_matchar,
    "minN": verify_minN,
    "theta": verify_theta,
    "named-K": verify_named,
    "logfacts": verify_logfacts,
    "lemma-key": verify_lemma_key,
    "trivstab": verify_trivstab,
    "oracle-consistency": verify_oracle,
}


@_timed
def cmd_verify(lemma_id: str, seed: int = 0, **kwargs) -> RunReport:
    """Run one property suite by id (see ``VERIFIERS``)."""
    if lemma_id not in VERIFIERS:
        raise KeyError(f"unknown verify id {lemma_id!r}; choose from {', '.join(VERIFIERS)}")
    try:
        return VERIFIERS[lemma_id](seed=seed, **kwargs)
    except CapExceeded as exc:
        rep = RunReport("verify", {"id": lemma_id}, seed=seed)
        rep.cap(str(exc))
        return rep
