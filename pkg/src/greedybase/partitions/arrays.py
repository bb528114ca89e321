"""Uniform set partitions and their intersection arrays.

A :class:`KLPartition` is a partition of ``1..kl`` into k parts of size l.
Its parts are *labelled*: ``parts[i]`` is part i, and intersection arrays are
indexed by those labels.  :meth:`KLPartition.canonical` reorders the parts by
smallest element, which is the usual normal form but loses the labelling that
a prescribed array needs.

Array indices are 0-based throughout; points of ``[kl]`` are 1-based.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class KLPartition:
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(p)) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        l = len(parts[0])
        if l == 0 or any(len(p) != l for p in parts):
            raise ValueError(f"parts must all have the same positive size: {parts!r}")
        pts = sorted(x for p in parts for x in p)
        if pts != list(range(1, len(pts) + 1)):
            raise ValueError(f"parts must be disjoint with union 1..{len(pts)}: {parts!r}")

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int) -> "KLPartition":
        """Build from ``labels[x-1]`` = part index of point x."""
        parts = [[] for _ in range(k)]
        for x, lab in enumerate(labels, start=1):
            parts[lab].append(x)
        return cls(tuple(tuple(p) for p in parts))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def l(self) -> int:
        return len(self.parts[0])

    @property
    def n(self) -> int:
        return self.k * self.l

    def labels(self) -> np.ndarray:
        """``labels[x-1]`` is the index of the part containing x."""
        lab = np.empty(self.n, dtype=np.int64)
        for i, p in enumerate(self.parts):
            lab[np.array(p) - 1] = i
        return lab

    def canonical(self) -> "KLPartition":
        return KLPartition(tuple(sorted(self.parts)))

    def is_canonical(self) -> bool:
        return list(self.parts) == sorted(self.parts)

    def as_point(self) -> frozenset:
        return frozenset(frozenset(p) for p in self.parts)

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.parts]

    @classmethod
    def from_json(cls, data) -> "KLPartition":
        return cls(tuple(tuple(p) for p in data))


class IntersectionTensor:
    """A k x ... x k array of nonnegative integers (t axes)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim < 1 or len(set(arr.shape)) != 1:
            raise ValueError(f"tensor must be k x ... x k, got shape {arr.shape}")
        if (arr < 0).any():
            raise ValueError("entries must be nonnegative")
        arr.setflags(write=False)
        self.entries = arr

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def t(self) -> int:
        return self.entries.ndim

    @property
    def l(self) -> int:
        total = int(self.entries.sum())
        if total % self.k:
            raise ValueError(f"total {total} is not a multiple of k={self.k}")
        return total // self.k

    def multiset(self) -> tuple[int, ...]:
        """The entry multiset A*, as a sorted tuple."""
        return tuple(sorted(self.entries.ravel().tolist()))

    def omega(self, x: int) -> int:
        return int((self.entries == x).sum())

    def counts(self) -> Counter:
        return Counter(self.entries.ravel().tolist())

    def axis_sums(self, axis: int) -> np.ndarray:
        """Sums over every axis except ``axis``."""
        others = tuple(a for a in range(self.t) if a != axis)
        return self.entries.sum(axis=others)

    def margin_violation(self, l: int | None = None) -> str | None:
        """Why this is not a (k,l)-intersection array, or None if it is."""
        if l is None:
            try:
                l = self.l
            except ValueError as exc:
                return str(exc)
        for axis in range(self.t):
            sums = self.axis_sums(axis)
            bad = np.nonzero(sums != l)[0]
            if len(bad):
                i = int(bad[0])
                return f"axis {axis} index {i} sums to {int(sums[i])}, expected {l}"
        return None

    def tolist(self):
        return self.entries.tolist()

    def __getitem__(self, idx):
        return self.entries[idx]

    def __eq__(self, other):
        return isinstance(other, IntersectionTensor) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"IntersectionTensor({self.entries.tolist()})"

    def to_json(self) -> dict:
        return {"k": self.k, "t": self.t, "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "IntersectionTensor":
        tensor = cls(data["entries"])
        if tensor.k != data.get("k", tensor.k) or tensor.t != data.get("t", tensor.t):
            raise ValueError("header does not match entries")
        return tensor


def intersection_tensor(partitions: Sequence[KLPartition]) -> IntersectionTensor:
    """The array of sizes of the intersections ``P1[i1] & ... & Pt[it]``."""
    if not partitions:
        raise ValueError("need at least one partition")
    k, l = partitions[0].k, partitions[0].l
    for p in partitions:
        if (p.k, p.l) != (k, l):
            raise ValueError(f"mismatched partitions: ({p.k},{p.l}) vs ({k},{l})")
    t = len(partitions)
    out = np.zeros((k,) * t, dtype=np.int64)
    np.add.at(out, tuple(p.labels() for p in partitions), 1)
    return IntersectionTensor(out)


def _as_tensor(A) -> IntersectionTensor:
    return A if isinstance(A, IntersectionTensor) else IntersectionTensor(A)


def realize2(N) -> tuple[KLPartition, KLPartition]:
    """Partitions P, Q with ``M(P, Q) = N``.

    Points ``1..kl`` are handed out in increasing order, cell by cell in
    row-major order; row i of N becomes part i of P, column j part j of Q.
    """
    N = _as_tensor(N)
    if N.t != 2:
        raise ValueError(f"realize2 needs a 2-array, got t={N.t}")
    k = N.k
    rows, cols = N.entries.sum(axis=1), N.entries.sum(axis=0)
    l = int(rows[0])
    for i in range(k):
        if rows[i] != l:
            raise ValueError(f"row {i} sums to {int(rows[i])}, expected {l}")
        if cols[i] != l:
            raise ValueError(f"column {i} sums to {int(cols[i])}, expected {l}")
    if l == 0:
        raise ValueError("margins must be positive")
    P = [[] for _ in range(k)]
    Q = [[] for _ in range(k)]
    x = 1
    for i in range(k):
        for j in range(k):
            cell = range(x, x + int(N[i, j]))
            P[i].extend(cell)
            Q[j].extend(cell)
            x += int(N[i, j])
    return KLPartition(tuple(map(tuple, P))), KLPartition(tuple(map(tuple, Q)))


def realize3(W, P: KLPartition, Q: KLPartition) -> KLPartition:
    """A partition T with ``M(P, Q, T) = W``.

    Part s of T takes, for every cell (i, j) in row-major order, the
    ``W[i, j, s]`` smallest points of ``P[i] & Q[j]`` not used by earlier parts.
    """
    W = _as_tensor(W)
    if W.t != 3:
        raise ValueError(f"realize3 needs a 3-array, got t={W.t}")
    k, l = P.k, P.l
    if W.k != k or (Q.k, Q.l) != (k, l):
        raise ValueError("W, P and Q must share k and l")
    N = intersection_tensor([P, Q])
    fibres = W.entries.sum(axis=2)
    for i in range(k):
        for j in range(k):
            if fibres[i, j] != N[i, j]:
                raise ValueError(
                    f"cell ({i},{j}): sum over s of W is {int(fibres[i, j])} but |P_i & Q_j| = {int(N[i, j])}"
                )
    slices = W.entries.sum(axis=(0, 1))
    for s in range(k):
        if slices[s] != l:
            raise ValueError(f"slice s={s} sums to {int(slices[s])}, expected {l}")
    cells = {
        (i, j): sorted(set(P.parts[i]) & set(Q.parts[j])) for i in range(k) for j in range(k)
    }
    T = []
    for s in range(k):
        part = []
        for i in range(k):
            for j in range(k):
                w = int(W[i, j, s])
                part.extend(cells[i, j][:w])
                cells[i, j] = cells[i, j][w:]
        T.append(tuple(part))
    return KLPartition(tuple(T))


def theta(v: Sequence[int]) -> IntersectionTensor:
    """The cyclic-shift matrix with (i, j) entry ``v[(j - i) mod k]``."""
    v = [int(x) for x in v]
    k = len(v)
    if any(x < 0 for x in v):
        raise ValueError("theta needs nonnegative entries")
    idx = (np.arange(k)[None, :] - np.arange(k)[:, None]) % k
    return IntersectionTensor(np.array(v, dtype=np.int64)[idx])


def E(k: int, i: int, j: int) -> np.ndarray:
    """Matrix unit with a 1 at the 1-based position (i, j)."""
    out = np.zeros((k, k), dtype=np.int64)
    out[i - 1, j - 1] = 1
    return out


def random_partition(k: int, l: int, rng) -> KLPartition:
    """A uniformly random labelled (k,l)-partition from a ``random.Random``."""
    pts = list(range(1, k * l + 1))
    rng.shuffle(pts)
    return KLPartition(tuple(tuple(pts[i * l : (i + 1) * l]) for i in range(k)))


def random_margin_matrix(k: int, l: int, rng) -> IntersectionTensor:
    """A random k x k array with all margins l (via two random partitions)."""
    return intersection_tensor([random_partition(k, l, rng), random_partition(k, l, rng)])


def random_split(N, rng) -> IntersectionTensor:
    """A random 3-array W arising from the 2-array N (a random third partition)."""
    P, Q = realize2(N)
    k, l = P.k, P.l
    return intersection_tensor([P, Q, random_partition(k, l, rng)])


def as_partitions(data: Iterable) -> list[KLPartition]:
    return [p if isinstance(p, KLPartition) else KLPartition(tuple(map(tuple, p))) for p in data]
