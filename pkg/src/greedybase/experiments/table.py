"""Upper bounds on the greedy base size for S_{k x l}, by (k, l) family.

Each :class:`Family` covers the pairs ``l = qk + off`` (``off`` in ``offsets``,
``q >= q_min``) and carries the proven upper bound for them.  The base size is
bounded below by ``log_k(l+2)`` and, trivially, by 2, so ``bound / max(2,
log_k(l+2))`` bounds the ratio of greedy to optimal.  Pairs outside every
family fall back to ``log2(log2 n) + 1`` with ``n = |Pi_{k,l}|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from greedybase.partitions.keylemma import ceil_log

RAVENOUS_CONSTANT = 11


def _log_bound(shift: Callable[[int], int]) -> Callable[[int, int], int]:
    # ceil(log_k(l + shift(k))) + 1, exactly
    return lambda k, l: ceil_log(k, l + shift(k)) + 1


@dataclass(frozen=True)
class Family:
    name: str
    ks: tuple[int, ...] | None  # None: every k >= k_min
    offsets: tuple[int, ...] | None  # None: every l >= l_min
    q_min: int
    bound: Callable[[int, int], int]
    k_min: int = 2
    l_min: int = 2

    def covers(self, k: int, l: int) -> bool:
        if self.ks is not None and k not in self.ks:
            return False
        if k < self.k_min or l < self.l_min:
            return False
        if self.offsets is None:
            return True
        return any((l - off) % k == 0 and (l - off) // k >= self.q_min for off in self.offsets)

    def describe(self) -> str:
        ks = "k>=%d" % self.k_min if self.ks is None else "k in %s" % list(self.ks)
        if self.offsets is None:
            return f"{self.name}: {ks}, l>={self.l_min}"
        offs = ",".join(f"{o:+d}" for o in self.offsets)
        return f"{self.name}: {ks}, l=qk{offs}, q>={self.q_min}"


def _l2_bound(k: int, l: int) -> int:
    return 4 if k == 3 else 3


FAMILIES: tuple[Family, ...] = (
    Family("l2", None, None, 0, _l2_bound, k_min=3, l_min=2),
    Family("k2", (2,), (0, 1), 5, _log_bound(lambda k: 8)),
    Family("k3", (3,), (0,), 5, _log_bound(lambda k: 9)),
    Family("other3", (3, 4), (1, -1), 5, _log_bound(lambda k: 3 * k)),
    Family("k4-6,0", (4, 5, 6), (0,), 11, _log_bound(lambda k: 3 * k)),
    Family("k4-6,2", (4,), (2,), 4, _log_bound(lambda k: 3 * k)),
    Family("k4-6,2", (5, 6), (2, -2), 5, _log_bound(lambda k: 3 * k)),
    Family("k5-6,1", (5, 6), (1, -1), 7, _log_bound(lambda k: 3 * k)),
    Family("k6-7,3", (6, 7), (3, -3), 1, _log_bound(lambda k: 2 * k)),
    Family("logbase", (7,), (-2, -1, 0, 1, 2), 1, _log_bound(lambda k: 3)),
    Family("logbase", None, None, 0, _log_bound(lambda k: 3), k_min=8, l_min=3),
)


def family_of(k: int, l: int) -> Family | None:
    """The first family covering (k, l); l = 2 takes precedence."""
    if l == 2 and k >= 3:
        return FAMILIES[0]
    for fam in FAMILIES[1:]:
        if fam.covers(k, l):
            return fam
    return None


def base_lower_bound(k: int, l: int) -> float:
    return max(2.0, math.log(l + 2) / math.log(k))


def partition_count(k: int, l: int) -> int:
    """``|Pi_{k,l}| = (kl)! / (l!^k k!)``."""
    return math.factorial(k * l) // (math.factorial(l) ** k * math.factorial(k))


def generic_bound(k: int, l: int) -> float:
    """``log2(log2 n) + 1`` for ``n = |Pi_{k,l}|``."""
    return math.log2(math.log2(partition_count(k, l))) + 1


@dataclass(frozen=True)
class TableRow:
    k: int
    l: int
    family: str
    bound: int | None
    lower: float
    ratio: float

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "family": self.family,
            "bound": self.bound,
            "lower": round(self.lower, 6),
            "ratio": round(self.ratio, 6),
        }


def table_row(k: int, l: int) -> TableRow:
    if k < 2 or l < 2 or k * l <= 4:
        raise ValueError(f"need k, l >= 2 with kl > 4, got k={k}, l={l}")
    fam = family_of(k, l)
    lower = base_lower_bound(k, l)
    if fam is None:
        return TableRow(k, l, "generic", None, lower, generic_bound(k, l))
    b = fam.bound(k, l)
    return TableRow(k, l, fam.name, b, lower, b / lower)


def sweep(k_max: int = 40, l_max: int = 600) -> Iterator[TableRow]:
    for k in range(2, k_max + 1):
        for l in range(2, l_max + 1):
            if k * l > 4:
                yield table_row(k, l)


def uncovered(k_max: int = 7, l_max: int = 600) -> list[tuple[int, int]]:
    """(k, l) pairs outside every family, for k <= k_max (none exist for k >= 8)."""
    return [(k, l) for k in range(2, k_max + 1) for l in range(2, l_max + 1) if k * l > 4 and family_of(k, l) is None]
