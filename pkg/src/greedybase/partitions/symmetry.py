"""Coordinatewise symmetries of intersection arrays.

K_A is the group of tuples ``(p_0, ..., p_{t-1})`` of permutations of
``range(k)`` with ``A[p_0(i_0), ..., p_{t-1}(i_{t-1})] = A[i_0, ..., i_{t-1}]``.
The two-point (or three-point) stabiliser in S_{kl} of partitions with
intersection array A has order ``|K_A| * prod(a! for a in A*)``.

Search: every axis index is first coloured by an invariant refinement of its
hyperplane's entry multiset; permutations of all but the last axis run over
colour-preserving bijections, and the last axis is then forced up to
permutations among identical slices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from greedybase.errors import CapExceeded
from greedybase.partitions.arrays import IntersectionTensor, _as_tensor

MAX_K = {1: 12, 2: 7, 3: 5}
SEARCH_CAP = 2 * 10**6

Perm = tuple[int, ...]


def _colours(A: np.ndarray) -> list[list[int]]:
    """Colour each index on each axis; refined until stable."""
    t, k = A.ndim, A.shape[0]
    colours = [[0] * k for _ in range(t)]
    while True:
        new = []
        for axis in range(t):
            moved = np.moveaxis(A, axis, 0)
            sigs = []
            for i in range(k):
                hyper = moved[i]
                items = []
                for idx in np.ndindex(*hyper.shape):
                    others = [a for a in range(t) if a != axis]
                    items.append((int(hyper[idx]),) + tuple(colours[o][c] for o, c in zip(others, idx)))
                sigs.append((colours[axis][i], tuple(sorted(items))))
            order = {s: c for c, s in enumerate(sorted(set(sigs)))}
            new.append([order[s] for s in sigs])
        if all(len(set(a)) == len(set(b)) for a, b in zip(new, colours)):
            return new
        colours = new


def _classes(colour: list[int]) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for i, c in enumerate(colour):
        out.setdefault(c, []).append(i)
    return list(out.values())


def _class_perms(classes: list[list[int]], k: int) -> Iterator[Perm]:
    """All permutations of range(k) mapping each class onto itself."""
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        perm = [0] * k
        for cls, img in zip(classes, choice):
            for a, b in zip(cls, img):
                perm[a] = b
        yield tuple(perm)


def _search_size(classes_per_axis) -> int:
    return math.prod(math.factorial(len(c)) for cl in classes_per_axis for c in cl)


@dataclass(frozen=True)
class ArraySymmetry:
    """K_A as its order plus a re-iterable enumeration of its elements."""

    order: int
    tensor: IntersectionTensor

    def elements(self) -> Iterator[tuple[Perm, ...]]:
        yield from _walk(self.tensor.entries, collect=True)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def to_json(self, max_elements: int = 1000) -> dict:
        els = list(itertools.islice(self.elements(), max_elements))
        return {
            "order": self.order,
            "elements": [[list(p) for p in g] for g in els],
            "complete": len(els) == self.order,
        }


def fixes(A, g: tuple[Perm, ...]) -> bool:
    arr = _as_tensor(A).entries
    return bool(np.array_equal(arr[np.ix_(*[np.array(p) for p in g])], arr))


def _check_guard(A: np.ndarray, classes_per_axis):
    t, k = A.ndim, A.shape[0]
    if t in MAX_K and k > MAX_K[t]:
        raise CapExceeded(f"symmetry search refused for t={t}, k={k} (limit k <= {MAX_K[t]})")
    if t not in MAX_K and _search_size(classes_per_axis[:-1]) > SEARCH_CAP:
        raise CapExceeded(f"symmetry search space for t={t}, k={k} exceeds {SEARCH_CAP}")


def _walk(A: np.ndarray, collect: bool):
    """Yield group elements (collect=True) or per-prefix counts (collect=False)."""
    t, k = A.ndim, A.shape[0]
    colours = _colours(A)
    classes = [_classes(c) for c in colours]
    _check_guard(A, classes)
    # slices along the last axis as byte keys
    a_keys = [np.ascontiguousarray(np.take(A, s, axis=t - 1)).tobytes() for s in range(k)]
    prefix_iters = [_class_perms(classes[a], k) for a in range(t - 1)]
    for prefix in itertools.product(*(list(it) for it in prefix_iters)):
        C = A[np.ix_(*[np.array(p) for p in prefix], np.arange(k))]
        groups: dict[bytes, list[int]] = {}
        for s in range(k):
            groups.setdefault(np.ascontiguousarray(np.take(C, s, axis=t - 1)).tobytes(), []).append(s)
        need: dict[bytes, list[int]] = {}
        for s, key in enumerate(a_keys):
            need.setdefault(key, []).append(s)
        if any(len(groups.get(key, ())) != len(v) for key, v in need.items()):
            continue
        if not collect:
            yield math.prod(math.factorial(len(v)) for v in need.values())
            continue
        keys = list(need)
        for choice in itertools.product(*(itertools.permutations(groups[key]) for key in keys)):
            rho = [0] * k
            for key, img in zip(keys, choice):
                for s, r in zip(need[key], img):
                    rho[s] = r
            yield tuple(prefix) + (tuple(rho),)


def array_symmetries(A) -> ArraySymmetry:
    """Exact K_A; refuses (CapExceeded) beyond the search guards."""
    A = _as_tensor(A)
    order = sum(_walk(A.entries, collect=False))
    return ArraySymmetry(order, A)


def factorial_product(A) -> int:
    counts = _as_tensor(A).counts()
    return math.prod(math.factorial(v) ** m for v, m in counts.items())


def stab_order(A) -> int:
    """``|K_A| * prod(entry!)``: the stabiliser order in S_{kl} of any realisation."""
    A = _as_tensor(A)
    return array_symmetries(A).order * factorial_product(A)


def _lex_rep(A: np.ndarray) -> tuple[int, ...]:
    k = A.shape[0]
    best = None
    for M in (A, A.T):
        for perm in itertools.permutations(range(k)):
            B = M[list(perm)]
            cols = sorted(map(tuple, B.T.tolist()))
            flat = tuple(np.array(cols, dtype=np.int64).T.ravel().tolist())
            if best is None or flat < best:
                best = flat
    return best


@dataclass(frozen=True)
class CanonicalForm:
    """Representative of a class under ``A ~ B`` (same A* and same |K|)."""

    multiset: tuple[int, ...]
    k_order: int
    representative: tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (self.multiset, self.k_order)

    def matrix(self) -> IntersectionTensor:
        k = math.isqrt(len(self.representative))
        return IntersectionTensor(np.array(self.representative).reshape(k, k))

    def to_json(self) -> dict:
        return {
            "multiset": list(self.multiset),
            "k_order": self.k_order,
            "representative": self.matrix().tolist(),
        }


def canonical_form(A, k_order: int | None = None) -> CanonicalForm:
    """(A*, |K_A|) plus the lexicographically least row/column/transpose image."""
    A = _as_tensor(A)
    if A.t != 2:
        raise ValueError("canonical_form is defined for 2-arrays")
    if k_order is None:
        k_order = array_symmetries(A).order
    return CanonicalForm(A.multiset(), k_order, _lex_rep(A.entries))


def equivalent(A, B) -> bool:
    """``A ~ B``: equal entry multisets and equal |K|."""
    A, B = _as_tensor(A), _as_tensor(B)
    return A.multiset() == B.multiset() and array_symmetries(A).order == array_symmetries(B).order
