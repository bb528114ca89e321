"""Minimising factorial products and stabiliser orders of 2-arrays.

``min_factorial_product`` is the closed form for the least value of
``prod(a!)`` over nonnegative integer multisets of size t and sum s that
contain prescribed extreme entries.  ``min_2array`` is an exact branch and
bound for the k x k arrays with all margins l of least stabiliser order
``|K_A| * prod(a!)``, reported up to ``~``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from greedybase.partitions.arrays import IntersectionTensor, theta
from greedybase.partitions.symmetry import CanonicalForm, array_symmetries, canonical_form


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class MultiplicitySeq:
    """Forced extreme entries: ``pairs[i] = (m_i, r_i)`` means m_i copies of r_i."""

    s: int
    t: int
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(m), int(r)) for m, r in self.pairs))
        problem = self.violation()
        if problem:
            raise ValueError(f"invalid multiplicity sequence: {problem}")

    def violation(self) -> str | None:
        s, t, pairs = self.s, self.t, self.pairs
        if s < 0 or t < 1:
            return f"need s >= 0 and t >= 1, got s={s}, t={t}"
        if any(m < 1 for m, _ in pairs):
            return "multiplicities must be positive"
        if any(r < 0 for _, r in pairs):
            return "ranks must be nonnegative"
        if pairs and sum(m for m, _ in pairs) >= t:
            return "sum of multiplicities must be < t"
        if pairs and sum(m * r for m, r in pairs) >= s:
            return "sum of m_i r_i must be < s"
        ranks = [r for _, r in pairs]
        hi, lo = _ceil_div(s, t), s // t
        up = all(a > b for a, b in zip(ranks, ranks[1:])) and all(r > hi for r in ranks)
        down = all(a < b for a, b in zip(ranks, ranks[1:])) and all(r < lo for r in ranks)
        if ranks and not (up or down):
            return f"ranks must be strictly decreasing above {hi} or strictly increasing below {lo}"
        return None

    @property
    def upper(self) -> bool:
        return bool(self.pairs) and self.pairs[0][1] > _ceil_div(self.s, self.t)

    def admits(self, multiset: Sequence[int]) -> bool:
        """Whether a multiset lies in S(s, t, X)."""
        if len(multiset) != self.t or sum(multiset) != self.s or min(multiset, default=0) < 0:
            return False
        need = 0
        for m, r in self.pairs:
            need += m
            if self.upper:
                have = sum(1 for a in multiset if a >= r)
            else:
                have = sum(1 for a in multiset if a <= r)
            if have < need:
                return False
        return True


@dataclass(frozen=True)
class FactorialMinimum:
    value: int
    witness: tuple[int, ...]
    x: float
    b: int

    def to_json(self) -> dict:
        return {"value": self.value, "witness": list(self.witness), "x": self.x, "b": self.b}


def min_factorial_product(s: int, t: int, X: Sequence[tuple[int, int]] | MultiplicitySeq = ()) -> FactorialMinimum:
    """Least ``prod(a!)`` over S(s, t, X), with its (unique) minimising multiset.

    The forced entries are taken exactly; the rest are as equal as possible.
    """
    X = X if isinstance(X, MultiplicitySeq) else MultiplicitySeq(s, t, tuple(X))
    if (X.s, X.t) != (s, t):
        raise ValueError("multiplicity sequence was built for different s, t")
    forced = [r for m, r in X.pairs for _ in range(m)]
    rest = s - sum(forced)
    free = t - len(forced)
    lo = rest // free
    b = rest - free * lo
    witness = tuple(sorted(forced + [lo + 1] * b + [lo] * (free - b)))
    value = math.prod(math.factorial(a) for a in witness)
    return FactorialMinimum(value, witness, rest / free, b)


@lru_cache(maxsize=None)
def flat_min(s: int, t: int) -> int:
    """``min prod(a!)`` over t nonnegative integers summing to s."""
    if t == 0:
        return 1 if s == 0 else math.inf
    q, b = divmod(s, t)
    return math.factorial(q + 1) ** b * math.factorial(q) ** (t - b)


def multisets(s: int, t: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Nonincreasing t-tuples of nonnegative integers summing to s."""
    cap = s if cap is None else cap
    if t == 0:
        if s == 0:
            yield ()
        return
    for first in range(min(s, cap), _ceil_div(s, t) - 1, -1):
        for tail in multisets(s - first, t - 1, first):
            yield (first,) + tail


def brute_min_factorial_product(s: int, t: int, X: MultiplicitySeq) -> tuple[int, list[tuple[int, ...]]]:
    """Exhaustive minimum over S(s, t, X) and every multiset attaining it."""
    best, arg = None, []
    for A in multisets(s, t):
        if not X.admits(A):
            continue
        v = math.prod(math.factorial(a) for a in A)
        if best is None or v < best:
            best, arg = v, [tuple(sorted(A))]
        elif v == best:
            arg.append(tuple(sorted(A)))
    if best is None:
        raise ValueError("S(s, t, X) is empty")
    return best, arg


def all_multiplicity_seqs(s: int, t: int) -> Iterator[MultiplicitySeq]:
    """Every valid multiplicity sequence for (s, t), the empty one included."""
    yield MultiplicitySeq(s, t, ())
    hi, lo = _ceil_div(s, t), s // t

    def grow(pairs, ranks_left):
        for idx, r in enumerate(ranks_left):
            for m in range(1, t):
                new = pairs + ((m, r),)
                if sum(a for a, _ in new) >= t or sum(a * b for a, b in new) >= s:
                    break
                yield MultiplicitySeq(s, t, new)
                yield from grow(new, ranks_left[idx + 1 :])

    yield from grow((), list(range(s, hi, -1)))
    yield from grow((), list(range(0, lo)))


# ---------------------------------------------------------------------------
# least stabiliser order among k x k arrays with margins l


@dataclass
class Min2ArrayResult:
    k: int
    l: int
    value: int | None
    classes: list[CanonicalForm]
    complete: bool
    nodes: int
    window: tuple[int, int]
    outside_bound: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "value": self.value,
            "classes": [c.to_json() for c in self.classes],
            "complete": self.complete,
            "nodes": self.nodes,
            "window": list(self.window),
            "outside_bound": self.outside_bound,
            "note": self.note,
        }


def _rows(k: int, l: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            if lo <= left <= hi:
                out.append(tuple(prefix + [left]))
            return
        for a in range(max(lo, left - hi * (slots - 1)), min(hi, left - lo * (slots - 1)) + 1):
            rec(prefix + [a], left - a, slots - 1)

    rec([], l, k)
    out.sort(reverse=True)
    return out


def outside_window_bound(k: int, l: int, lo: int, hi: int) -> int | None:
    """Lower bound on ``prod(a!)`` for arrays with some entry outside [lo, hi].

    The row and column through the extreme entry a are bounded separately
    from the remaining (k-1)^2 entries.  None means nothing lies outside.
    """
    cands = [a for a in range(0, l + 1) if a < lo or a > hi]
    if not cands or k == 1:
        return None
    rest = (k - 1) ** 2
    return min(
        math.factorial(a) * flat_min(l - a, k - 1) ** 2 * flat_min((k - 2) * l + a, rest) for a in cands
    )


def _seed(k: int, l: int) -> int:
    q, b = divmod(l, k)
    A = theta([q + 1] * b + [q] * (k - b))
    return array_symmetries(A).order * math.prod(math.factorial(int(a)) for a in A.entries.ravel())


def _search(k, l, lo, hi, best, budget, nodes0):
    rows = _rows(k, l, lo, hi)
    fact = [math.factorial(a) for a in range(l + 1)]
    row_val = {r: math.prod(fact[a] for a in r) for r in rows}
    row_lb = flat_min(l, k)
    found: dict[tuple, CanonicalForm] = {}
    state = {"best": best, "nodes": nodes0, "stopped": False}
    cache: dict[bytes, int] = {}

    def k_order(M: np.ndarray) -> int:
        key = M.tobytes()
        if key not in cache:
            cache[key] = array_symmetries(IntersectionTensor(M)).order
        return cache[key]

    def leaf(chosen, val):
        M = np.array(chosen, dtype=np.int64)
        total = k_order(M) * val
        if total < state["best"]:
            state["best"] = total
            found.clear()
        if total == state["best"]:
            cf = canonical_form(IntersectionTensor(M), k_order(M))
            found.setdefault(cf.key, cf)

    def rec(chosen, cols, val, start):
        if state["stopped"]:
            return
        state["nodes"] += 1
        if budget is not None and state["nodes"] > budget:
            state["stopped"] = True
            return
        left = k - len(chosen)
        if left == 1:
            last = tuple(cols)
            if min(last) < lo or max(last) > hi or (chosen and last > chosen[-1]):
                return
            v = val * math.prod(fact[a] for a in last)
            if v <= state["best"]:
                leaf(chosen + [last], v)
            return
        for idx in range(start, len(rows)):
            r = rows[idx]
            new_cols = [c - a for c, a in zip(cols, r)]
            if min(new_cols) < lo * (left - 1) or max(new_cols) > hi * (left - 1):
                continue
            v = val * row_val[r]
            bound = v * max(row_lb ** (left - 1), math.prod(flat_min(c, left - 1) for c in new_cols))
            if bound > state["best"]:
                continue
            rec(chosen + [r], new_cols, v, idx)

    rec([], [l] * k, 1, 0)
    return state["best"], found, state["nodes"], state["stopped"]


def min_2array(k: int, l: int, budget: int | None = None, window: int = 3) -> Min2ArrayResult:
    """All k x k arrays with margins l of least ``|K_A| prod(a!)``, up to ``~``.

    Rows are enumerated in nonincreasing lexicographic order (row order is a
    symmetry) with entries in ``[floor(l/k) - c, ceil(l/k) + c]``.  After the
    search, an outside-window lower bound either proves the window complete
    or the window is widened and the search repeated.
    """
    if k < 2 or l < 1:
        raise ValueError(f"need k >= 2 and l >= 1, got k={k}, l={l}")
    best = _seed(k, l)
    c, nodes = window, 0
    while True:
        lo, hi = max(0, l // k - c), min(l, _ceil_div(l, k) + c)
        best, found, nodes, stopped = _search(k, l, lo, hi, best, budget, nodes)
        if stopped:
            return Min2ArrayResult(
                k, l, best if found else None, sorted(found.values(), key=lambda f: f.representative),
                False, nodes, (lo, hi), note="node budget exhausted; best so far",
            )
        outside = outside_window_bound(k, l, lo, hi)
        if outside is None or outside > best:
            return Min2ArrayResult(
                k, l, best, sorted(found.values(), key=lambda f: f.representative), True, nodes, (lo, hi), outside
            )
        c += 2


@dataclass
class Min3ArrayResult:
    N: IntersectionTensor
    value: int
    classes: list[IntersectionTensor]
    k_orders: list[int]

    def to_json(self) -> dict:
        return {
            "N": self.N.tolist(),
            "value": self.value,
            "classes": [W.tolist() for W in self.classes],
            "k_orders": self.k_orders,
        }


def min_3array(N) -> Min3ArrayResult:
    """Least ``|K_W| prod(w!)`` over all 3-arrays W arising from the 2 x 2 array N.

    Exhaustive: W is fixed by the slice-0 entries, three of them free.
    Minimisers are reported once per (W*, |K_W|) class.
    """
    from greedybase.partitions.symmetry import stab_order, array_symmetries

    N = N if isinstance(N, IntersectionTensor) else IntersectionTensor(N)
    if N.t != 2 or N.k != 2:
        raise ValueError("min_3array is implemented for 2 x 2 arrays")
    if N.margin_violation():
        raise ValueError(N.margin_violation())
    l = N.l
    n = N.entries
    best, found = None, {}
    for a in range(n[0, 0] + 1):
        for b in range(n[0, 1] + 1):
            for c in range(n[1, 0] + 1):
                d = l - a - b - c
                if not 0 <= d <= n[1, 1]:
                    continue
                W = IntersectionTensor(
                    [[(a, n[0, 0] - a), (b, n[0, 1] - b)], [(c, n[1, 0] - c), (d, n[1, 1] - d)]]
                )
                v = stab_order(W)
                if best is None or v < best:
                    best, found = v, {}
                if v == best:
                    found.setdefault((W.multiset(), array_symmetries(W).order), W)
    keys = sorted(found)
    return Min3ArrayResult(N, best, [found[key] for key in keys], [key[1] for key in keys])
