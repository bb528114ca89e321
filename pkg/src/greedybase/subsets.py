"""Greedy bases of S_n and A_n acting on r-subsets of [n].

The pointwise stabiliser in S_n of a collection of r-sets is the direct
product of the symmetric groups on its *cells*: classes of points with the
same neighbourhood (the set of chosen r-sets containing the point).  A cell is
keyed by its signature, the sorted tuple of step indices whose sets contain
it, so the whole stabiliser is carried as a signature -> size map and no group
element is ever built.

Two state granularities are used:

* :class:`CellState` keeps signatures (and optionally explicit member points);
  it drives single greedy runs and their diagnostics.
* the exhaustive search in :func:`max_greedy_size` keeps only the sorted
  multiset of cell sizes, since that determines the stabiliser up to
  conjugacy in S_n and therefore the whole greedy continuation.
"""

from __future__ import annotations

import random
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterator, Mapping, Sequence

SYM, ALT = "sym", "alt"
GROUPS = (SYM, ALT)

Signature = tuple[int, ...]
CountVector = tuple[tuple[Signature, int], ...]


def _check_group(group: str) -> str:
    group = group.lower()
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    return group


def make_rset(points, n: int, r: int) -> tuple[int, ...]:
    """Validate and normalise an r-subset of 1..n to a sorted tuple."""
    pts = tuple(sorted(points))
    if len(pts) != r or len(set(pts)) != r:
        raise ValueError(f"expected {r} distinct points, got {points!r}")
    if pts and (pts[0] < 1 or pts[-1] > n):
        raise ValueError(f"points must lie in 1..{n}: {points!r}")
    return pts


@dataclass(frozen=True)
class Cell:
    signature: Signature
    size: int
    members: tuple[int, ...] | None = None


@dataclass(frozen=True)
class CellState:
    """Pointwise stabiliser of ``chosen`` as a partition of [n] into cells.

    ``cells`` is sorted by signature and holds only nonempty cells.  Members
    are tracked when the state is explicit; a sizes-only state has
    ``members=None`` on every cell and an empty ``chosen``-point record.
    """

    n: int
    r: int
    chosen: tuple[tuple[int, ...], ...]
    cells: tuple[Cell, ...]
    steps: int = 0

    @classmethod
    def initial(cls, n: int, r: int, explicit: bool = True) -> "CellState":
        if not 1 <= r < n:
            raise ValueError(f"need 1 <= r < n, got n={n}, r={r}")
        members = tuple(range(1, n + 1)) if explicit else None
        return cls(n, r, (), (Cell((), n, members),), 0)

    @classmethod
    def from_chosen(cls, n: int, r: int, chosen: Sequence) -> "CellState":
        state = cls.initial(n, r)
        for alpha in chosen:
            state = state.add(alpha)
        return state

    @property
    def explicit(self) -> bool:
        return self.cells[0].members is not None

    def sizes(self) -> tuple[int, ...]:
        return tuple(sorted((c.size for c in self.cells), reverse=True))

    def stabiliser_order(self) -> int:
        return prod(factorial(c.size) for c in self.cells)

    def cell_of(self, u: int) -> Cell:
        self._need_members()
        for c in self.cells:
            if u in c.members:
                return c
        raise ValueError(f"point {u} not in 1..{self.n}")

    def neighbourhood(self, u: int) -> Signature:
        return self.cell_of(u).signature

    def _need_members(self):
        if not self.explicit:
            raise ValueError("operation needs an explicit (member-tracking) state")

    def add(self, alpha) -> "CellState":
        """Append an explicit r-set and split the cells it meets."""
        self._need_members()
        alpha = make_rset(alpha, self.n, self.r)
        inside = set(alpha)
        step = self.steps + 1
        cells = []
        for c in self.cells:
            hit = tuple(x for x in c.members if x in inside)
            miss = tuple(x for x in c.members if x not in inside)
            if hit:
                cells.append(Cell(c.signature + (step,), len(hit), hit))
            if miss:
                cells.append(Cell(c.signature, len(miss), miss))
        cells.sort(key=lambda c: c.signature)
        return CellState(self.n, self.r, self.chosen + (alpha,), tuple(cells), step)

    def apply(self, counts: Mapping[Signature, int] | CountVector) -> "CellState":
        """Choose ``counts[sig]`` points from each cell.

        Explicit states take the smallest available members of each cell, so
        the new r-set is recorded in ``chosen``.
        """
        counts = dict(counts)
        if sum(counts.values()) != self.r:
            raise ValueError(f"counts must sum to r={self.r}")
        by_sig = {c.signature: c for c in self.cells}
        for sig, cnt in counts.items():
            if sig not in by_sig or not 0 <= cnt <= by_sig[sig].size:
                raise ValueError(f"invalid count {cnt} for cell {sig}")
        if self.explicit:
            alpha = [x for sig, cnt in counts.items() for x in by_sig[sig].members[:cnt]]
            return self.add(alpha)
        step = self.steps + 1
        cells = []
        for c in self.cells:
            cnt = counts.get(c.signature, 0)
            if cnt:
                cells.append(Cell(c.signature + (step,), cnt))
            if c.size - cnt:
                cells.append(Cell(c.signature, c.size - cnt))
        cells.sort(key=lambda c: c.signature)
        return CellState(self.n, self.r, (), tuple(cells), step)

    def counts_of(self, alpha) -> CountVector:
        """The count-vector (cell -> |alpha ∩ cell|) of an explicit r-set."""
        self._need_members()
        inside = set(alpha)
        out = []
        for c in self.cells:
            cnt = sum(1 for x in c.members if x in inside)
            if cnt:
                out.append((c.signature, cnt))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "steps": self.steps,
            "chosen": [list(a) for a in self.chosen],
            "cells": [
                {
                    "signature": list(c.signature),
                    "size": c.size,
                    "members": None if c.members is None else list(c.members),
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CellState":
        cells = tuple(
            Cell(tuple(c["signature"]), c["size"], None if c["members"] is None else tuple(c["members"]))
            for c in data["cells"]
        )
        chosen = tuple(tuple(a) for a in data["chosen"])
        return cls(data["n"], data["r"], chosen, cells, data.get("steps", len(chosen)))


def is_base(state: CellState, group: str = SYM) -> bool:
    """Whether the chosen sets form a base for S_{n,r} or A_{n,r}."""
    group = _check_group(group)
    big = [c.size for c in state.cells if c.size > 1]
    if group == SYM:
        return not big
    # a product of symmetric groups meets A_n trivially iff its order is <= 2
    return not big or big == [2]


def orbit_size(alpha, state: CellState) -> int:
    """Length of the orbit of ``alpha`` under the pointwise stabiliser in S_n."""
    inside = set(alpha)
    state._need_members()
    return prod(comb(c.size, sum(1 for x in c.members if x in inside)) for c in state.cells)


def count_orbit_size(counts: Mapping[Signature, int] | CountVector, state: CellState) -> int:
    counts = dict(counts)
    return prod(comb(c.size, counts.get(c.signature, 0)) for c in state.cells)


def _star(size: int, taken: int) -> Fraction:
    return Fraction(size - taken, taken + 1)


def _metagreedy_options(state: CellState, taken: Mapping[Signature, int]) -> list[Cell]:
    """Cells MetaGreedy may draw its next point from, given points taken so far."""
    best, opts = None, []
    for c in state.cells:
        t = taken.get(c.signature, 0)
        if t >= c.size:
            continue
        v = _star(c.size, t)
        if best is None or v > best:
            best, opts = v, [c]
        elif v == best:
            opts.append(c)
    if best == 1:
        smallest = min(len(c.signature) for c in opts)
        opts = [c for c in opts if len(c.signature) == smallest]
    return opts


def meta_greedy_candidates(state: CellState) -> frozenset[CountVector]:
    """Every count-vector reachable by some sequence of r MetaGreedy point choices."""
    level: set[tuple[tuple[Signature, int], ...]] = {()}
    for _ in range(state.r):
        nxt = set()
        for taken_t in level:
            taken = dict(taken_t)
            for c in _metagreedy_options(state, taken):
                t2 = dict(taken)
                t2[c.signature] = t2.get(c.signature, 0) + 1
                nxt.add(tuple(sorted(t2.items())))
        level = nxt
    return frozenset(level)


def _deterministic_counts(state: CellState) -> CountVector:
    taken: dict[Signature, int] = {}
    for _ in range(state.r):
        c = min(_metagreedy_options(state, taken), key=lambda c: c.signature)
        taken[c.signature] = taken.get(c.signature, 0) + 1
    return tuple(sorted(taken.items()))


def _random_alpha(state: CellState, rng: random.Random) -> tuple[int, ...]:
    # uniform over points of the allowed cells, as MetaGreedy permits any point
    taken: dict[Signature, list[int]] = {}
    for _ in range(state.r):
        pool = [
            x
            for c in _metagreedy_options(state, {s: len(v) for s, v in taken.items()})
            for x in c.members
            if x not in taken.get(c.signature, ())
        ]
        x = rng.choice(pool)
        taken.setdefault(state.cell_of(x).signature, []).append(x)
    return tuple(sorted(x for v in taken.values() for x in v))


class PolicyError(ValueError):
    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class StepDiagnostics:
    """Quantities attached to B_i = {alpha_1..alpha_i}."""

    i: int
    e: int
    F: tuple[int, ...]
    u: int | None
    O: tuple[tuple[int, ...], ...]
    excessive: tuple[bool, ...]

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "e": self.e,
            "F": list(self.F),
            "u": self.u,
            "O": [list(a) for a in self.O],
            "excessive": list(self.excessive),
        }


@dataclass(frozen=True)
class GreedyDiagnostics:
    n: int
    r: int
    group: str
    base: tuple[tuple[int, ...], ...]
    s: int
    steps: tuple[StepDiagnostics, ...]
    states: tuple[CellState, ...] = field(repr=False)
    degenerate: bool = False

    @property
    def size(self) -> int:
        return len(self.base)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "group": self.group,
            "degenerate": self.degenerate,
            "base": [list(a) for a in self.base],
            "s": self.s,
            "steps": [st.to_json() for st in self.steps],
            "final_state": self.states[-1].to_json(),
        }


def _disjoint_prefix(base: Sequence[tuple[int, ...]]) -> int:
    seen: set[int] = set()
    for s, alpha in enumerate(base):
        if seen & set(alpha):
            return s
        seen |= set(alpha)
    return len(base)


def _u_value(base, i: int, F: set[int], s: int, r: int) -> int | None:
    rest = [len(set(a) - F) for a in base[:i]]
    core = rest[: min(i, s)]
    for u in range(r, -1, -1):
        if all(x in (u, u - 1) for x in core) and any(x == u for x in rest[: i - 1]):
            return u
    return None


def diagnose(base: Sequence[tuple[int, ...]], n: int, r: int) -> tuple[int, tuple[StepDiagnostics, ...]]:
    """Per-step E_i, F_i, u_i, O_i and excessive flags for a sequence of r-sets."""
    s = _disjoint_prefix(base)
    used: set[int] = set()
    cover: Counter = Counter()
    out = []
    for i, alpha in enumerate(base, start=1):
        used |= set(alpha)
        cover.update(alpha)
        F = {m for m, c in cover.items() if c > 1}
        u = _u_value(base, i, F, s, r) if i > 1 else None
        O: tuple = ()
        excessive = tuple(False for _ in range(i))
        if u is not None:
            O = tuple(
                tuple(sorted(set(a) - F)) for a in base[:i] if len(set(a) - F) in (u, u - 1)
            )
            excessive = tuple(len(set(a) - F) > u for a in base[:i])
        out.append(StepDiagnostics(i, n - len(used), tuple(sorted(F)), u, O, excessive))
    return s, tuple(out)


def greedy_run(
    n: int,
    r: int,
    group: str = SYM,
    policy: None | random.Random | Sequence[int] = None,
) -> GreedyDiagnostics:
    """One greedy run driven by MetaGreedy, with full diagnostics.

    ``policy`` is ``None`` for the deterministic tie-break, a
    :class:`random.Random` for uniformly random MetaGreedy point choices, or a
    sequence of indices into the sorted candidate list at each step.
    """
    group = _check_group(group)
    state = CellState.initial(n, r)
    degenerate = n <= 2 * r
    if degenerate:
        warnings.warn(f"n={n} <= 2r={2 * r}: outside the range the bounds are stated for", stacklevel=2)
    states = [state]
    step = 0
    while not is_base(state, group):
        if isinstance(policy, random.Random):
            alpha = _random_alpha(state, policy)
            state = state.add(alpha)
        else:
            if policy is None:
                counts = _deterministic_counts(state)
            else:
                cands = sorted(meta_greedy_candidates(state))
                if step >= len(policy):
                    raise PolicyError(f"choice sequence ended before a base was reached", step + 1)
                idx = policy[step]
                if not 0 <= idx < len(cands):
                    raise PolicyError(
                        f"index {idx} out of range for {len(cands)} candidates", step + 1
                    )
                counts = cands[idx]
            state = state.apply(counts)
        states.append(state)
        step += 1
    base = state.chosen
    s, steps = diagnose(base, n, r)
    return GreedyDiagnostics(n, r, group, base, s, steps, tuple(states), degenerate)


# ---------------------------------------------------------------------------
# exhaustive search over greedy runs

SizeState = tuple[int, ...]


def _size_choices(sizes: SizeState, r: int) -> Iterator[tuple[tuple[int, tuple[int, ...]], ...]]:
    """Every way (up to permuting equal-size cells) of drawing r points from cells.

    Yields tuples of ``(cell size, counts)`` where ``counts`` is a non-increasing
    tuple of positive draws from distinct cells of that size.
    """
    classes = sorted(Counter(sizes).items(), reverse=True)

    def parts(total, most, top):
        if total == 0:
            yield ()
            return
        if most == 0:
            return
        for first in range(min(total, top), 0, -1):
            for rest in parts(total - first, most - 1, first):
                yield (first,) + rest

    def rec(idx, left):
        if left == 0:
            yield ()
            return
        if idx == len(classes):
            return
        size, mult = classes[idx]
        for amount in range(min(left, size * mult), -1, -1):
            for cnts in parts(amount, mult, size):
                for tail in rec(idx + 1, left - amount):
                    yield (((size, cnts),) if cnts else ()) + tail

    yield from rec(0, r)


def _apply_sizes(sizes: SizeState, choice) -> SizeState:
    pool = Counter(sizes)
    out: list[int] = []
    for size, cnts in choice:
        pool[size] -= len(cnts)
        for c in cnts:
            out.append(c)
            if size - c:
                out.append(size - c)
    for size, mult in pool.items():
        out.extend([size] * mult)
    return tuple(sorted(out, reverse=True))


def _sizes_is_base(sizes: SizeState, group: str) -> bool:
    big = [s for s in sizes if s > 1]
    return not big if group == SYM else (not big or big == [2])


def greedy_successors(sizes: SizeState, r: int, group: str = SYM) -> set[SizeState]:
    """Cell-size states reachable by one greedy step (a largest-orbit r-set)."""
    best, found = -1, set()
    for choice in _size_choices(sizes, r):
        orbit = prod(comb(size, c) for size, cnts in choice for c in cnts)
        nxt = _apply_sizes(sizes, choice)
        if group == ALT and all(x <= 1 for x in nxt):
            # the stabiliser of alpha has no odd element: the A_n-orbit is half
            orbit = Fraction(orbit, 2)
        if orbit > best:
            best, found = orbit, {nxt}
        elif orbit == best:
            found.add(nxt)
    return found


def _metagreedy_successors(state: tuple[tuple[int, int], ...], r: int):
    # state: sorted multiset of (size, |signature|); MetaGreedy depends on nothing else
    cells = CellState(
        sum(s for s, _ in state),
        r,
        (),
        tuple(Cell(tuple(range(d)) + (-(j + 1),), s) for j, (s, d) in enumerate(state)),
    )
    out = set()
    for cand in meta_greedy_candidates(cells):
        counts = dict(cand)
        nxt = []
        for c in cells.cells:
            t = counts.get(c.signature, 0)
            depth = len(c.signature) - 1
            if t:
                nxt.append((t, depth + 1))
            if c.size - t:
                nxt.append((c.size - t, depth))
        out.add(tuple(sorted(nxt)))
    return out


@dataclass(frozen=True)
class GreedySearchResult:
    """Outcome of an exhaustive greedy search.

    When ``exact`` is False the node budget ran out and ``value`` is only a
    lower bound: the longest complete greedy run seen before stopping.
    """

    n: int
    r: int
    group: str
    value: int
    min_value: int | None
    exact: bool
    nodes: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "group": self.group,
            "value": self.value,
            "min_value": self.min_value,
            "exact": self.exact,
            "nodes": self.nodes,
        }


class _Budget(Exception):
    pass


def max_greedy_size(
    n: int, r: int, group: str = SYM, budget: int | None = None, method: str = "sizes"
) -> GreedySearchResult:
    """Exact maximum (and minimum) size of a greedy base, by exhaustive search.

    ``method="sizes"`` branches over every largest-orbit choice on cell-size
    states.  ``method="metagreedy"`` branches only over MetaGreedy outputs on
    (size, neighbourhood size) states; the two must agree.
    """
    group = _check_group(group)
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got n={n}, r={r}")
    memo: dict = {}
    nodes = 0
    best_seen = 0

    if method == "sizes":
        root = (n,)
        succ = lambda st: greedy_successors(st, r, group)
        done = lambda st: _sizes_is_base(st, group)
    elif method == "metagreedy":
        root = ((n, 0),)
        succ = lambda st: _metagreedy_successors(st, r)
        done = lambda st: _sizes_is_base(tuple(s for s, _ in st), group)
    else:
        raise ValueError(f"unknown method {method!r}")

    def visit(st, depth):
        nonlocal nodes, best_seen
        if st in memo:
            best_seen = max(best_seen, depth + memo[st][0])
            return memo[st]
        if done(st):
            best_seen = max(best_seen, depth)
            memo[st] = (0, 0)
            return memo[st]
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Budget
        outs = [visit(nx, depth + 1) for nx in succ(st)]
        memo[st] = (1 + max(o[0] for o in outs), 1 + min(o[1] for o in outs))
        return memo[st]

    try:
        mx, mn = visit(root, 0)
    except _Budget:
        return GreedySearchResult(n, r, group, best_seen, None, False, nodes)
    return GreedySearchResult(n, r, group, mx, mn, True, nodes)


# ---------------------------------------------------------------------------
# checks of the structural lemmas on a single trace


@dataclass(frozen=True)
class Violation:
    check: str
    step: int | None
    detail: str

    def to_json(self) -> dict:
        return {"check": self.check, "step": self.step, "detail": self.detail}


@dataclass(frozen=True)
class LemmaReport:
    passed: bool
    checks: tuple[str, ...]
    violations: tuple[Violation, ...]
    skipped: str | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": list(self.checks),
            "violations": [v.to_json() for v in self.violations],
            "skipped": self.skipped,
        }


def _orbcomp_violation(state: CellState, alpha) -> str | None:
    inside = set(alpha)
    cut = [(sum(1 for x in c.members if x in inside), c) for c in state.cells]
    for hit1, c1 in cut:
        if not hit1:
            continue
        for hit2, c2 in cut:
            # (|D1\a|+1)/|D1∩a| >= |D2\a|/(|D2∩a|+1)
            if (c1.size - hit1 + 1) * (hit2 + 1) < (c2.size - hit2) * hit1:
                return f"cells {c1.signature} and {c2.signature}"
    return None


def check_section2_lemmas(trace: GreedyDiagnostics) -> LemmaReport:
    """Evaluate the structural claims about greedy runs on one trace.

    Only meaningful for ``n >= 4 r^2 >= 16``; other traces are reported as
    skipped rather than checked.
    """
    n, r = trace.n, trace.r
    if not (n >= 4 * r * r >= 16):
        return LemmaReport(True, (), (), skipped=f"hypothesis n >= 4r^2 >= 16 fails for n={n}, r={r}")
    base, steps, s = trace.base, trace.steps, trace.s
    bad: list[Violation] = []
    checks = (
        "orbcomp",
        "s>=3r",
        "u-monotone",
        "one-point-per-O",
        "|O|>=3r",
        "unique-excessive",
        "excess-recovers",
        "final-neighbourhoods",
        "size-bound",
    )

    for i, alpha in enumerate(base):
        what = _orbcomp_violation(trace.states[i], alpha)
        if what:
            bad.append(Violation("orbcomp", i + 1, f"alpha_{i + 1} breaks the inequality for {what}"))

    # a run that ends before two sets are disjoint-free has s = |B|; s >= 3r only binds if it can
    if s < 3 * r and s < len(base):
        bad.append(Violation("s>=3r", None, f"s = {s} < 3r = {3 * r}"))

    u = {st.i: st.u for st in steps}
    for st in steps[1:]:
        i = st.i
        if st.u is None:
            bad.append(Violation("u-monotone", i, "u_i undefined"))
        elif i == 2 and st.u != r:
            bad.append(Violation("u-monotone", i, f"u_2 = {st.u} != r = {r}"))
        elif i > 2 and u[i - 1] is not None and st.u not in (u[i - 1], u[i - 1] - 1):
            bad.append(Violation("u-monotone", i, f"u_{i} = {st.u} after u_{i - 1} = {u[i - 1]}"))

    for st in steps[1:]:
        i = st.i
        if st.u is None or i >= len(base):
            continue
        nxt = set(base[i])
        for part in st.O:
            if len(nxt & set(part)) > 1:
                bad.append(
                    Violation("one-point-per-O", i, f"alpha_{i + 1} meets {part} in more than one point")
                )
                break

    for st in steps[1:]:
        if st.i >= s and st.u is not None and len(st.O) < 3 * r:
            bad.append(Violation("|O|>=3r", st.i, f"|O_{st.i}| = {len(st.O)} < {3 * r}"))

    exc = {st.i: any(st.excessive) for st in steps}
    for st in steps[1:-1]:
        i = st.i
        nxt = steps[i]
        if exc[i] or not exc[i + 1]:
            continue
        flagged = [j + 1 for j, e in enumerate(nxt.excessive) if e]
        if flagged != [i + 1]:
            bad.append(Violation("unique-excessive", i + 1, f"excessive sets {flagged} in B_{i + 1}"))
        if st.u is not None and nxt.u is not None:
            f = len(set(base[i]) - (set(range(1, n + 1)) - _uncovered(base[:i], n)))
            ui = st.u
            case1 = nxt.u == ui == f - 1 and nxt.e <= ui * ui + ui
            case2 = nxt.u + 1 == ui <= f <= ui + 1 and nxt.e <= ui * ui
            if not (case1 or case2):
                bad.append(
                    Violation("unique-excessive", i + 1, f"f={f}, u_i={ui}, u_i+1={nxt.u}, e_i+1={nxt.e}")
                )
        if st.u is not None and st.u > 2:
            later = [exc.get(i + j) for j in (2, 3) if i + j in exc]
            if later and all(later) and len(later) == 2:
                bad.append(Violation("excess-recovers", i + 1, f"B_{i + 2} and B_{i + 3} both excessive"))

    cover = Counter(x for a in base for x in a)
    threes = [m for m, c in cover.items() if c == 3]
    over = [m for m, c in cover.items() if c > 3]
    if over or len(threes) > r:
        bad.append(
            Violation("final-neighbourhoods", len(base), f"{len(threes)} points of degree 3, {len(over)} above 3")
        )

    if len(base) * r > 2 * n + r:
        bad.append(Violation("size-bound", len(base), f"|B| = {len(base)} > 2n/r + 1"))
    if not any(exc.values()) and len(base) * r > 2 * n:
        bad.append(Violation("size-bound", len(base), f"no excessive B_i but |B| = {len(base)} > 2n/r"))

    return LemmaReport(not bad, checks, tuple(bad))


def _uncovered(prefix, n: int) -> set[int]:
    used = {x for a in prefix for x in a}
    return set(range(1, n + 1)) - used
