"""Greedy continuation from partwise-fixed states, and a size-three base.

A *state* is a tuple of partitions P_1..P_m (or just the multiset of sizes of
their m-wise intersections).  When every P_i is partwise fixed and some size
t with ``t % k != 0`` occurs at least k times, greedy finishes in exactly
``ceil(log_k(max size))`` more steps; :func:`lemma_key_continue` builds the
next partition that realises this and :func:`lemma_key_iterate` runs it out.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from greedybase.errors import CapExceeded, HypothesisError
from greedybase.partitions.arrays import IntersectionTensor, KLPartition, as_partitions, intersection_tensor
from greedybase.partitions.symmetry import array_symmetries


def ceil_log(k: int, x: int) -> int:
    """Least e >= 0 with ``k**e >= x`` (exact integer arithmetic)."""
    if k < 2 or x < 1:
        raise ValueError(f"ceil_log needs k >= 2 and x >= 1, got k={k}, x={x}")
    e, p = 0, 1
    while p < x:
        p *= k
        e += 1
    return e


def _witness(sizes: Counter, k: int) -> int | None:
    good = [t for t, m in sizes.items() if t % k and m >= k]
    return max(good) if good else None


@dataclass(frozen=True)
class KeyCheck:
    holds: bool
    witness: int | None
    k_order: int | None
    reason: str = ""

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness, "k_order": self.k_order, "reason": self.reason}


def lemma_key_check(state) -> KeyCheck:
    """Check partwise-fixedness (trivial K) and the multiplicity condition.

    ``state`` is an intersection tensor or a sequence of partitions.
    """
    if not isinstance(state, IntersectionTensor):
        state = intersection_tensor(as_partitions(state))
    k = state.k
    order = array_symmetries(state).order
    w = _witness(state.counts(), k)
    if order != 1:
        return KeyCheck(False, w, order, f"not partwise fixed: |K| = {order}")
    if w is None:
        return KeyCheck(False, None, order, f"no size t with t % {k} != 0 occurs {k} or more times")
    return KeyCheck(True, w, order)


def split_sizes(sizes: Counter, k: int) -> Counter:
    """Sizes after a partition meets every cell A in floor/ceil(|A|/k) points."""
    out: Counter = Counter()
    for a, m in sizes.items():
        lo, extra = divmod(a, k)
        if extra:
            out[lo + 1] += extra * m
        if lo:
            out[lo] += (k - extra) * m
    return out


def _is_sym_base(sizes: Counter) -> bool:
    return max(sizes, default=0) <= 1


def _is_alt_base(sizes: Counter) -> bool:
    big = {a: m for a, m in sizes.items() if a > 1}
    return not big or big == {2: 1}


@dataclass
class KeyState:
    """Sizes of the m-wise intersections, plus the partitions when explicit."""

    k: int
    sizes: Counter
    partitions: tuple[KLPartition, ...] | None = None

    @classmethod
    def from_partitions(cls, partitions: Sequence) -> "KeyState":
        parts = tuple(as_partitions(partitions))
        sizes = Counter(a for a in intersection_tensor(parts).entries.ravel().tolist() if a)
        return cls(parts[0].k, sizes, parts)

    @classmethod
    def from_tensor(cls, tensor: IntersectionTensor) -> "KeyState":
        return cls(tensor.k, Counter(a for a in tensor.entries.ravel().tolist() if a))

    @property
    def max_size(self) -> int:
        return max(self.sizes, default=0)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "sizes": {str(a): m for a, m in sorted(self.sizes.items())},
            "partitions": None if self.partitions is None else [p.to_json() for p in self.partitions],
        }


@dataclass(frozen=True)
class KeyStep:
    state: KeyState
    t: int
    v: tuple[int, ...]
    predicted_remaining: int
    partition: KLPartition | None = None


def _cells(partitions: Sequence[KLPartition]) -> dict[tuple[int, ...], list[int]]:
    labels = np.stack([p.labels() for p in partitions], axis=1)
    cells: dict[tuple[int, ...], list[int]] = {}
    for x, lab in enumerate(labels.tolist(), start=1):
        cells.setdefault(tuple(lab), []).append(x)
    return cells


def next_partition(partitions: Sequence[KLPartition], t: int) -> KLPartition:
    """The next greedy partition built from k cells of size t.

    The first k cells of size t (by label) are cut by the cyclic-shift array
    with a = t mod k leading entries ceil(t/k); every other cell is cut into
    near-equal pieces, with the larger pieces handed out cyclically so the
    parts come out equal.
    """
    k, l = partitions[0].k, partitions[0].l
    cells = _cells(partitions)
    same = [lab for lab in sorted(cells) if len(cells[lab]) == t][:k]
    if len(same) < k:
        raise HypothesisError(f"fewer than {k} cells of size {t}", failed="multiplicity")
    a = t % k
    v = [t // k + 1] * a + [t // k] * (k - a)
    parts = [[] for _ in range(k)]
    for i, lab in enumerate(same):
        pts = cells[lab]
        pos = 0
        for j in range(k):
            take = v[(j - i) % k]
            parts[j].extend(pts[pos : pos + take])
            pos += take
    pointer = 0
    for lab in sorted(cells):
        if lab in same:
            continue
        pts = cells[lab]
        lo, extra = divmod(len(pts), k)
        pos = 0
        for step in range(k):
            j = (pointer + step) % k
            take = lo + (1 if step < extra else 0)
            parts[j].extend(pts[pos : pos + take])
            pos += take
        pointer = (pointer + extra) % k
    if any(len(p) != l for p in parts):
        raise AssertionError("construction produced unequal parts")
    return KLPartition(tuple(tuple(p) for p in parts))


def _columns_distinct(partitions: Sequence[KLPartition], new: KLPartition, t: int) -> bool:
    cells = _cells(partitions)
    same = [lab for lab in sorted(cells) if len(cells[lab]) == t][: new.k]
    lab = new.labels()
    cols = {tuple(int((lab[np.array(cells[c]) - 1] == j).sum()) for c in same) for j in range(new.k)}
    return len(cols) == new.k


def lemma_key_continue(state: KeyState, check: bool = True) -> KeyStep:
    """One step of the construction, with the predicted number of steps left."""
    k = state.k
    if check:
        if state.partitions is not None:
            verdict = lemma_key_check(state.partitions)
            if not verdict.holds:
                raise HypothesisError(verdict.reason, failed="partwise-fixed" if verdict.k_order != 1 else "multiplicity")
        elif _witness(state.sizes, k) is None:
            raise HypothesisError(f"no size t with t % {k} != 0 occurs {k} or more times", failed="multiplicity")
    t = _witness(state.sizes, k)
    if t is None:
        raise HypothesisError("multiplicity condition fails", failed="multiplicity")
    predicted = ceil_log(k, state.max_size) if state.max_size else 0
    a = t % k
    v = tuple([t // k + 1] * a + [t // k] * (k - a))
    new_sizes = split_sizes(state.sizes, k)
    new_part = None
    new_parts = None
    if state.partitions is not None:
        new_part = next_partition(state.partitions, t)
        new_parts = state.partitions + (new_part,)
        got = Counter(len(c) for c in _cells(new_parts).values())
        if got != new_sizes:
            raise AssertionError("explicit construction disagrees with the size recursion")
        if not _columns_distinct(state.partitions, new_part, t):
            raise AssertionError("new partition is not partwise fixed")
    return KeyStep(KeyState(k, new_sizes, new_parts), t, v, predicted)


@dataclass
class KeyRun:
    k: int
    start_max: int
    predicted: int
    sym_steps: int
    alt_steps: int
    maxima: list[int] = field(default_factory=list)
    partitions: tuple[KLPartition, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.sym_steps == self.predicted and self.sym_steps - 1 <= self.alt_steps <= self.sym_steps

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "start_max": self.start_max,
            "predicted": self.predicted,
            "sym_steps": self.sym_steps,
            "alt_steps": self.alt_steps,
            "maxima": self.maxima,
            "ok": self.ok,
        }


def lemma_key_iterate(state: KeyState, max_steps: int = 64) -> KeyRun:
    """Run the construction until the stabiliser is trivial (Sym) and record
    when the alternating group would already have stopped."""
    if state.partitions is not None:
        verdict = lemma_key_check(state.partitions)
        if not verdict.holds:
            raise HypothesisError(verdict.reason)
    predicted = ceil_log(state.k, state.max_size) if state.max_size else 0
    run = KeyRun(state.k, state.max_size, predicted, 0, 0, [state.max_size])
    alt_seen = _is_alt_base(state.sizes)
    cur = state
    steps = 0
    while not _is_sym_base(cur.sizes):
        if steps >= max_steps:
            raise CapExceeded(f"no base after {max_steps} steps")
        step = lemma_key_continue(cur, check=False)
        cur = step.state
        steps += 1
        run.maxima.append(cur.max_size)
        if not alt_seen and _is_alt_base(cur.sizes):
            run.alt_steps = steps
            alt_seen = True
    run.sym_steps = steps
    if not alt_seen:
        run.alt_steps = steps
    run.partitions = cur.partitions
    return run


# ---------------------------------------------------------------------------
# a third partition with trivial three-point stabiliser


@dataclass
class TrivstabResult:
    T: KLPartition
    sigma: tuple[tuple[int, ...], tuple[int, ...]]
    transpositions: int
    I_size: int
    fixed_points: int

    def to_json(self) -> dict:
        return {
            "T": self.T.to_json(),
            "sigma": [list(p) for p in self.sigma],
            "transpositions": self.transpositions,
            "I_size": self.I_size,
            "fixed_points": self.fixed_points,
        }


def trivstab_conditions(P: KLPartition, Q: KLPartition) -> dict:
    """Evaluate the hypotheses; returns a dict with a ``failed`` list."""
    k, l = P.k, P.l
    N = intersection_tensor([P, Q])
    out = {"k": k, "l": l, "failed": []}
    if k < 7:
        out["failed"].append("k>=7")
    if not set(N.counts()) <= {0, 1, 2}:
        out["failed"].append("entries")
        return out
    K = array_symmetries(N)
    els = [g for g in K.elements() if g != (tuple(range(k)), tuple(range(k)))]
    out["k_order"] = K.order
    if K.order != 2:
        out["failed"].append("(i)")
        return out
    pi, rho = els[0]
    n = N.entries
    moved = [(i, j) for i in range(k) for j in range(k) if (pi[i], rho[j]) != (i, j)]
    t = sum(1 for i, j in moved if n[i, j]) // 2
    I = [(i, j) for i in range(k) for j in range(k) if n[i, j] == 2]
    out.update(sigma=(pi, rho), t=t, I=len(I))
    if not any(n[i, j] == 1 for i, j in moved):
        out["failed"].append("(ii)")
    if len(I) > 2 * l - 3:
        out["failed"].append("(iii)")
    if 2 * (len(I) + t) > k * l - 2:
        out["failed"].append("(iv)")
    return out


def trivstab_construct(P: KLPartition, Q: KLPartition) -> TrivstabResult:
    """A partition T with trivial stabiliser of (P, Q, T), built from two
    fixed points, one point of a swapped singleton cell, and one point of
    every doubleton cell."""
    cond = trivstab_conditions(P, Q)
    if cond["failed"]:
        raise HypothesisError(f"hypotheses fail: {', '.join(cond['failed'])}", failed=cond["failed"])
    k, l = P.k, P.l
    pi, rho = cond["sigma"]
    N = intersection_tensor([P, Q]).entries
    cell = {
        (i, j): sorted(set(P.parts[i]) & set(Q.parts[j])) for i in range(k) for j in range(k) if N[i, j]
    }
    swap = {(i, j): (pi[i], rho[j]) for (i, j) in cell}
    fixed = sorted(cell[c][0] for c in cell if N[c] == 1 and swap[c] == c)
    J1 = sorted(c for c in cell if N[c] == 1 and swap[c] != c and c < swap[c])
    I = sorted(c for c in cell if N[c] == 2)
    if len(fixed) < 2:
        raise AssertionError("fewer than two fixed points despite the hypotheses")
    T = [cell[c][0] for c in I] + [cell[J1[0]][0]] + fixed[:2]
    pool = sorted(set(fixed[2:]) | {cell[c][0] for c in J1[1:]})
    T += pool[: 2 * l - len(T)]
    if len(T) != 2 * l:
        raise AssertionError("not enough points to fill T")
    f1, f2 = fixed[0], fixed[1]
    rest = sorted(set(T) - {f1, f2})
    T1 = [f1] + rest[: l - 1]
    T2 = [f2] + rest[l - 1 :]
    others = sorted(set(range(1, k * l + 1)) - set(T))
    parts = [tuple(T1), tuple(T2)] + [tuple(others[i * l : (i + 1) * l]) for i in range(k - 2)]
    return TrivstabResult(KLPartition(tuple(parts)), (pi, rho), cond["t"], cond["I"], len(fixed))


def _invariant_partition(sigma: dict, k: int, l: int, rng) -> KLPartition | None:
    """A random (k,l)-partition whose parts ``sigma`` permutes, or None."""
    pts = list(sigma)
    rng.shuffle(pts)
    used: set[int] = set()
    parts = []
    for _ in range(8 * k):
        if len(used) == k * l:
            break
        avail = [x for x in pts if x not in used]
        if rng.random() < 0.5 and len(avail) >= 2 * l:
            # a part and its disjoint image
            p: list[int] = []
            for x in avail:
                if sigma[x] != x and x not in p and sigma[x] not in p:
                    p.append(x)
                if len(p) == l:
                    break
            if len(p) < l:
                continue
            parts += [p, [sigma[x] for x in p]]
            used |= set(p) | {sigma[x] for x in p}
        else:
            # a part mapped to itself: 2-cycles topped up with fixed points
            fix = [x for x in avail if sigma[x] == x]
            two = [x for x in avail if sigma[x] > x]
            p = []
            while len(p) + 2 <= l and two and (rng.random() < 0.6 or len(fix) < l - len(p)):
                x = two.pop(0)
                p += [x, sigma[x]]
            p += fix[: l - len(p)]
            if len(p) < l:
                return None
            parts.append(p)
            used |= set(p)
    if len(used) != k * l:
        return None
    return KLPartition(tuple(map(tuple, parts)))


def random_trivstab_instance(k: int, l: int, rng, tries: int = 10000) -> tuple[KLPartition, KLPartition]:
    """Random (P, Q) satisfying the trivstab hypotheses.

    Both partitions are invariant under a random point involution, which
    makes an involutory K likely; draws are repeated until every hypothesis
    holds.
    """
    n = k * l
    for _ in range(tries):
        m = rng.randint(2, max(2, min(6, n // 2)))
        pts = list(range(1, n + 1))
        rng.shuffle(pts)
        sigma = {x: x for x in pts}
        for i in range(m):
            a, b = pts[2 * i], pts[2 * i + 1]
            sigma[a], sigma[b] = b, a
        P = _invariant_partition(sigma, k, l, rng)
        Q = _invariant_partition(sigma, k, l, rng) if P else None
        if Q and not trivstab_conditions(P, Q)["failed"]:
            return P, Q
    raise CapExceeded(f"no trivstab instance found for k={k}, l={l} in {tries} draws")


# ---------------------------------------------------------------------------


def logfacts_check(k: int, l: int) -> bool:
    """``ceil(log_k(q+1)) == ceil(log_k(l+3)) - 1`` for l = qk + eps, |eps| <= 2."""
    if k < 7:
        raise HypothesisError(f"needs k >= 7, got {k}", failed="k")
    q = (l + 2) // k
    eps = l - q * k
    if l < 1 or q < 0 or eps not in (-2, -1, 0, 1, 2):
        raise HypothesisError(f"l={l} is not qk + eps with |eps| <= 2", failed="eps")
    return ceil_log(k, q + 1) == ceil_log(k, l + 3) - 1


def logfacts_sweep(k_range=range(7, 51), q_max: int = 10**4) -> list[tuple[int, int]]:
    """All (k, l) in the sweep where the identity fails (expected: none)."""
    bad = []
    for k in k_range:
        powers = [1]
        while powers[-1] < k * (q_max + 1) + 3:
            powers.append(powers[-1] * k)
        for q in range(1, q_max + 1):
            lhs = bisect.bisect_left(powers, q + 1)
            for eps in (-2, -1, 0, 1, 2):
                l = q * k + eps
                if lhs != bisect.bisect_left(powers, l + 3) - 1:
                    bad.append((k, l))
    return bad
