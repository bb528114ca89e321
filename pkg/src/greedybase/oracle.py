"""Brute-force permutation groups at tiny degree.

Groups are stored as explicit element arrays: row ``e`` of ``elements`` lists
the images of the points ``0..n-1`` under the ``e``-th element.  Everything
here is exhaustive and slow on purpose; it is the ground truth the analytic
engines in :mod:`greedybase.subsets` and :mod:`greedybase.partitions` are
checked against.

Points of the domain ``[n]`` are 1-based at the public surface (r-subsets and
partitions are sets of integers in ``1..n``), 0-based inside element arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from greedybase.errors import CapExceeded

OMEGA_CAP = 10**5
GROUP_CAP = 10**6
TABLE_CAP = 3 * 10**7


@dataclass(frozen=True)
class Perm:
    """A permutation of ``1..n`` given by its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        # right action: x^(gh) = (x^g)^h
        return Perm(tuple(other(self(x)) for x in range(1, self.degree + 1)))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for x, y in enumerate(self.images, start=1):
            inv[y - 1] = x
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(y == x for x, y in enumerate(self.images, start=1))


class ExplicitGroup:
    """A permutation group on ``1..n`` stored as its full element list."""

    def __init__(self, n: int, elements: np.ndarray):
        elements = np.asarray(elements, dtype=np.int16)
        if elements.ndim != 2 or elements.shape[1] != n:
            raise ValueError("elements must have shape (order, n)")
        if len(elements) > GROUP_CAP:
            raise CapExceeded(f"group order {len(elements)} exceeds cap {GROUP_CAP}")
        self.n = n
        self.elements = elements

    @classmethod
    def from_perms(cls, perms: Iterable[Perm], n: int) -> "ExplicitGroup":
        rows = [[y - 1 for y in p.images] for p in perms]
        return cls(n, np.array(rows, dtype=np.int16).reshape(-1, n))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    def perms(self) -> Iterator[Perm]:
        for row in self.elements:
            yield Perm(tuple(int(y) + 1 for y in row))

    def subgroup(self, mask: np.ndarray) -> "ExplicitGroup":
        return ExplicitGroup(self.n, self.elements[mask])

    def even_part(self) -> "ExplicitGroup":
        return self.subgroup(is_even(self.elements))

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_closed(self) -> bool:
        """Check closure under composition and inverses (quadratic; small groups only)."""
        keys = {row.tobytes() for row in self.elements}
        ident = np.arange(self.n, dtype=self.elements.dtype)
        if ident.tobytes() not in keys:
            return False
        for g in self.elements:
            if np.argsort(g).astype(self.elements.dtype).tobytes() not in keys:
                return False
            # x^(gh) = h[g[x]]
            prods = self.elements[:, g]
            if any(p.tobytes() not in keys for p in prods):
                return False
        return True


def is_even(elements: np.ndarray) -> np.ndarray:
    """Parity mask (True = even) for each row, by counting inversions."""
    n = elements.shape[1]
    inv = np.zeros(len(elements), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += elements[:, i] > elements[:, j]
    return inv % 2 == 0


def symmetric_group(n: int) -> ExplicitGroup:
    if math.factorial(n) > GROUP_CAP:
        raise CapExceeded(f"|S_{n}| = {math.factorial(n)} exceeds cap {GROUP_CAP}")
    rows = np.array(list(itertools.permutations(range(n))), dtype=np.int16).reshape(-1, n)
    return ExplicitGroup(n, rows)


def alternating_group(n: int) -> ExplicitGroup:
    return symmetric_group(n).even_part()


def set_partition_stabiliser(n: int, parts: Sequence[Iterable[int]]) -> ExplicitGroup:
    """The stabiliser in S_n of a uniform set partition (a wreath product S_l wr S_k).

    Built directly rather than by filtering S_n, so it reaches degrees where S_n
    itself is out of range.
    """
    blocks = [sorted(x - 1 for x in part) for part in parts]
    k, l = len(blocks), len(blocks[0])
    if any(len(b) != l for b in blocks) or sorted(x for b in blocks for x in b) != list(range(n)):
        raise ValueError("parts must be a uniform partition of 1..n")
    order = math.factorial(l) ** k * math.factorial(k)
    if order > GROUP_CAP:
        raise CapExceeded(f"stabiliser order {order} exceeds cap {GROUP_CAP}")
    block_arr = np.array(blocks, dtype=np.int16)
    sym_l = np.array(list(itertools.permutations(range(l))), dtype=np.int16)
    choice = np.indices((len(sym_l),) * k).reshape(k, -1).T
    chunks = []
    for sigma in itertools.permutations(range(k)):
        out = np.empty((len(choice), n), dtype=np.int16)
        for i in range(k):
            out[:, block_arr[i]] = block_arr[sigma[i]][sym_l[choice[:, i]]]
        chunks.append(out)
    return ExplicitGroup(n, np.concatenate(chunks))


class _Action:
    """A permutation action of S_n on a finite set of combinatorial objects."""

    n: int
    points: tuple

    def _setup(self):
        if len(self.points) > OMEGA_CAP:
            raise CapExceeded(f"|Omega| = {len(self.points)} exceeds cap {OMEGA_CAP}")
        keys = np.array([self.key(p) for p in self.points], dtype=np.int64)
        self._order = np.argsort(keys)
        self._sorted_keys = keys[self._order]
        self._index = {p: i for i, p in enumerate(self.points)}

    def index(self, point) -> int:
        return self._index[self._normalise(point)]

    def _normalise(self, point):
        return point

    def key(self, point) -> int:
        raise NotImplementedError

    def image_keys(self, elements: np.ndarray, points: Sequence) -> np.ndarray:
        raise NotImplementedError

    def table(self, group: ExplicitGroup, chunk: int = 4096) -> np.ndarray:
        """``table[e, i]`` is the index of the image of point ``i`` under element ``e``."""
        if group.order * len(self.points) > TABLE_CAP:
            raise CapExceeded(
                f"action table {group.order} x {len(self.points)} exceeds cap {TABLE_CAP}"
            )
        out = np.empty((group.order, len(self.points)), dtype=np.int32)
        for start in range(0, group.order, chunk):
            keys = self.image_keys(group.elements[start:start + chunk], self.points)
            pos = np.searchsorted(self._sorted_keys, keys)
            if not np.array_equal(self._sorted_keys[np.minimum(pos, len(self.points) - 1)], keys):
                raise ValueError("group does not preserve the domain")
            out[start:start + chunk] = self._order[pos]
        return out

    def fixes(self, group: ExplicitGroup, points: Sequence) -> np.ndarray:
        """Mask of group elements fixing every listed point."""
        points = [self._normalise(p) for p in points]
        if not points:
            return np.ones(group.order, dtype=bool)
        want = np.array([self.key(p) for p in points], dtype=np.int64)
        mask = np.empty(group.order, dtype=bool)
        step = 1 << 15
        for start in range(0, group.order, step):
            keys = self.image_keys(group.elements[start:start + step], points)
            mask[start:start + step] = (keys == want).all(axis=1)
        return mask


class SubsetAction(_Action):
    """S_n on the r-subsets of ``1..n``; points are frozensets."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        if math.comb(n, r) > OMEGA_CAP:
            raise CapExceeded(f"C({n},{r}) exceeds cap {OMEGA_CAP}")
        self.points = tuple(frozenset(c) for c in itertools.combinations(range(1, n + 1), r))
        self._setup()

    def _normalise(self, point):
        return frozenset(point)

    def key(self, point) -> int:
        return sum(1 << (x - 1) for x in point)

    def image_keys(self, elements, points):
        pts = np.array([sorted(x - 1 for x in p) for p in points], dtype=np.int64)
        imgs = elements.astype(np.int64)[:, pts]
        return (np.int64(1) << imgs).sum(axis=-1)


class PartitionAction(_Action):
    """S_{kl} on the partitions of ``1..kl`` into k parts of size l.

    Points are frozensets of frozensets.  A partition is keyed by the bitmasks
    of its k-1 smallest parts (by mask value), which requires ``kl*(k-1) <= 62``.
    """

    def __init__(self, k: int, l: int):
        self.k, self.l, self.n = k, l, k * l
        if self.n * (k - 1) > 62:
            raise CapExceeded(f"partition keys for k={k}, l={l} do not fit in 64 bits")
        count = math.factorial(self.n) // (math.factorial(l) ** k * math.factorial(k))
        if count > OMEGA_CAP:
            raise CapExceeded(f"|Pi_{k},{l}| = {count} exceeds cap {OMEGA_CAP}")
        self.points = tuple(_uniform_partitions(list(range(1, self.n + 1)), l))
        self._setup()

    def _normalise(self, point):
        return frozenset(frozenset(part) for part in point)

    def key(self, point) -> int:
        masks = sorted(sum(1 << (x - 1) for x in part) for part in point)
        return sum(m << (self.n * j) for j, m in enumerate(masks[:-1]))

    def image_keys(self, elements, points):
        parts = np.array(
            [sorted(sorted(x - 1 for x in part) for part in p) for p in points], dtype=np.int64
        )
        imgs = elements.astype(np.int64)[:, parts]
        masks = np.sort((np.int64(1) << imgs).sum(axis=-1), axis=-1)
        shifts = np.arange(self.k - 1, dtype=np.int64) * self.n
        return (masks[..., :-1] << shifts).sum(axis=-1)


def _uniform_partitions(remaining: list[int], l: int):
    if not remaining:
        yield frozenset()
        return
    first, rest = remaining[0], remaining[1:]
    for others in itertools.combinations(rest, l - 1):
        part = frozenset((first,) + others)
        left = [x for x in rest if x not in part]
        for tail in _uniform_partitions(left, l):
            yield tail | {part}


def _orbit_labels(sub_table: np.ndarray) -> np.ndarray:
    # orbit of i is {table[s, i]}; its minimum is a canonical label
    return sub_table.min(axis=0)


def orbits_on(group: ExplicitGroup, action: _Action) -> list[list]:
    """Orbit decomposition of the action's domain, largest orbits first."""
    table = action.table(group)
    labels = _orbit_labels(table)
    orbits: dict[int, list] = {}
    for i, lab in enumerate(labels):
        orbits.setdefault(int(lab), []).append(action.points[i])
    return sorted(orbits.values(), key=lambda o: (-len(o), action.index(o[0])))


def pointwise_stabiliser(group: ExplicitGroup, action: _Action, points: Sequence) -> ExplicitGroup:
    return group.subgroup(action.fixes(group, points))


@dataclass(frozen=True)
class GreedyEnumeration:
    max_size: int
    min_size: int
    runs: int


def exhaustive_greedy(group: ExplicitGroup, action: _Action, all_points: bool = False) -> GreedyEnumeration:
    """Enumerate greedy runs of ``group`` on the action's domain.

    By default one point is taken from each largest orbit: points in the same
    orbit of the current stabiliser give conjugate subtrees.  ``all_points``
    branches on every point of every largest orbit instead.  A run stops when
    the stabiliser acts trivially on the domain.
    """
    table = action.table(group)
    memo: dict[bytes, tuple[int, int, int]] = {}

    def visit(rows: np.ndarray) -> tuple[int, int, int]:
        key = rows.tobytes()
        if key in memo:
            return memo[key]
        sub = table[rows]
        labels = _orbit_labels(sub)
        counts = np.bincount(labels, minlength=sub.shape[1])
        big = counts.max()
        if big == 1:
            result = (0, 0, 1)
        else:
            if all_points:
                choices = np.flatnonzero(counts[labels] == big)
            else:
                choices = np.flatnonzero(counts == big)
            outs = [visit(rows[sub[:, b] == b]) for b in choices]
            result = (
                1 + max(o[0] for o in outs),
                1 + min(o[1] for o in outs),
                sum(o[2] for o in outs),
            )
        memo[key] = result
        return result

    mx, mn, runs = visit(np.arange(group.order, dtype=np.int32))
    return GreedyEnumeration(mx, mn, runs)


def min_base_size(group: ExplicitGroup, action: _Action, max_depth: int | None = None) -> int:
    """Exact base size by iterative deepening over orbit representatives.

    Refuses when the domain has more than 40 points and no solution exists
    within ``max_depth`` (default 5) levels.
    """
    table = action.table(group)
    size = len(action.points)
    if max_depth is None:
        max_depth = size if size <= 40 else 5
    every = np.arange(group.order, dtype=np.int32)
    kernel = int((table == np.arange(size)).all(axis=1).sum())
    failed: set[tuple[bytes, int]] = set()

    def reachable(rows: np.ndarray, depth: int) -> bool:
        if len(rows) == kernel:
            return True
        if depth == 0:
            return False
        key = (rows.tobytes(), depth)
        if key in failed:
            return False
        sub = table[rows]
        labels = _orbit_labels(sub)
        counts = np.bincount(labels, minlength=size)
        big = int(counts.max())
        if len(rows) > kernel * big**depth:
            failed.add(key)
            return False
        reps = np.flatnonzero(counts > 1)
        for b in reps[np.argsort(-counts[reps], kind="stable")]:
            if reachable(rows[sub[:, b] == b], depth - 1):
                return True
        failed.add(key)
        return False

    quotient = group.order // kernel
    depth = 0 if quotient == 1 else max(1, math.ceil(math.log(quotient) / math.log(size) - 1e-12))
    while depth <= max_depth:
        if reachable(every, depth):
            return depth
        depth += 1
    raise CapExceeded(f"no base of size <= {max_depth} found; search refused beyond the cap")


def partition_tuple_stabiliser(n: int, partitions: Sequence[Sequence[Iterable[int]]], cap: int = GROUP_CAP) -> list[tuple[int, ...]]:
    """All permutations of ``1..n`` fixing every given set partition.

    Backtracking over the images of ``1, 2, ...`` while keeping, for each
    partition, the induced part-to-part map consistent.  Needs no element
    list for S_n, so it reaches degrees well beyond :func:`symmetric_group`.
    Returns 1-based image tuples; raises :class:`CapExceeded` after ``cap``.
    """
    labels = []
    for parts in partitions:
        lab = [-1] * (n + 1)
        for j, part in enumerate(parts):
            for x in part:
                if not 1 <= x <= n or lab[x] != -1:
                    raise ValueError(f"not a set partition of 1..{n}: {parts!r}")
                lab[x] = j
        if -1 in lab[1:]:
            raise ValueError(f"not a set partition of 1..{n}: {parts!r}")
        labels.append(lab)
    t = len(labels)
    image = [0] * (n + 1)
    used = [False] * (n + 1)
    fwd = [dict() for _ in range(t)]
    back = [dict() for _ in range(t)]
    found: list[tuple[int, ...]] = []

    def extend(x: int):
        if x > n:
            if len(found) >= cap:
                raise CapExceeded(f"stabiliser has more than {cap} elements")
            found.append(tuple(image[1:]))
            return
        for y in range(1, n + 1):
            if used[y]:
                continue
            new = []
            ok = True
            for p in range(t):
                a, b = labels[p][x], labels[p][y]
                if a in fwd[p]:
                    if fwd[p][a] != b:
                        ok = False
                        break
                elif b in back[p]:
                    ok = False
                    break
                else:
                    new.append((p, a, b))
            if not ok:
                continue
            for p, a, b in new:
                fwd[p][a] = b
                back[p][b] = a
            image[x], used[y] = y, True
            extend(x + 1)
            used[y] = False
            for p, a, b in new:
                del fwd[p][a]
                del back[p][b]

    extend(1)
    return found
