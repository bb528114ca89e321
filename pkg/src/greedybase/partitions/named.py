"""Named intersection arrays with small stabilisers.

Every family takes the parameters of its range and returns the exact array;
``expected_multiset`` gives the closed-form entry multiset each family is
meant to have and ``expected_k_order`` its claimed |K|.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from greedybase.partitions.arrays import E, IntersectionTensor, theta


def _need(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def k2(l: int) -> IntersectionTensor:
    _need(l >= 10, f"k2 needs l >= 10, got {l}")
    a, b = l // 2 + 1, -(-l // 2) - 1
    return IntersectionTensor([[a, b], [b, a]])


def k2_W(l: int) -> IntersectionTensor:
    """The 2 x 2 x 2 array reached after three greedy steps for k = 2."""
    _need(l >= 10, f"k2_W needs l >= 10, got {l}")
    # for l = 1 mod 4 the second pattern has slice sums l+1 and l-1
    _need(l % 4 != 1, f"k2_W is not a valid 3-array for l = 1 mod 4 (l={l})")
    if l % 4 == 2:
        m = (l - 2) // 4
        W = [[(m + 2, m), (m, m)], [(m - 1, m + 1), (m + 1, m + 1)]]
    else:
        N = k2(l).entries
        n11, n12 = int(N[0, 0]), int(N[0, 1])
        W = [
            [(-(-n11 // 2) + 1, n11 // 2 - 1), (n12 // 2, -(-n12 // 2))],
            [(n12 // 2, -(-n12 // 2)), (n11 // 2, -(-n11 // 2))],
        ]
    return IntersectionTensor(W)


def k3(q: int) -> IntersectionTensor:
    _need(q >= 5, f"k3 needs q >= 5, got {q}")
    return IntersectionTensor([[q - 2, q + 2, q], [q + 2, q - 1, q - 1], [q, q - 1, q + 1]])


def k3_W(q: int) -> IntersectionTensor:
    """The 3 x 3 x 3 array arising from k3(q) when q = 3m + 1."""
    _need(q >= 5 and q % 3 == 1, f"k3_W needs q >= 5 with q = 1 mod 3, got {q}")
    m = (q - 1) // 3
    return IntersectionTensor(
        [
            [(m - 1, m, m), (m + 1, m + 1, m + 1), (m + 1, m, m)],
            [(m + 1, m + 1, m + 1), (m, m, m), (m, m, m)],
            [(m, m, m + 1), (m, m, m), (m + 1, m + 1, m)],
        ]
    )


def other3(k: int, q: int, eps: int) -> IntersectionTensor:
    _need(k in (3, 4) and q >= 5 and eps in (1, -1), f"other3 needs k in {{3,4}}, q >= 5, eps = +-1")
    e = eps
    if k == 3:
        return IntersectionTensor([[q, q - e, q + 2 * e], [q + e, q + e, q - e], [q, q + e, q]])
    return IntersectionTensor(
        [
            [q, q, q - e, q + 2 * e],
            [q + e, q, q + e, q - e],
            [q, q + e, q, q],
            [q, q, q + e, q],
        ]
    )


def L(k: int, q: int) -> IntersectionTensor:
    _need(3 <= k <= 6 and q >= 2, f"L needs 3 <= k <= 6 and q >= 2, got k={k}, q={q}")
    first = [q + 2] + [q] * (k - 3) + [q - 1, q - 1]
    middle = theta([q - 1, q + 1] + [q] * (k - 2)).entries[: k - 2].tolist()
    last = [q - 1] + [q] * (k - 2) + [q + 1]
    return IntersectionTensor([first] + middle + [last])


def _v(k: int, q: int, r: int) -> list[int]:
    return [q + 1] * r + [q] * (k - r)


def theta_E(k: int, q: int, r: int) -> IntersectionTensor:
    _need(k in (6, 7) and q >= 1 and r in (3, k - 3), f"theta_E needs k in {{6,7}}, q >= 1, r in {{3, k-3}}")
    N = theta(_v(k, q, r)).entries - E(k, k - 2, k - 2) + E(k, k - 2, k - 1) + E(k, k - 1, k - 2) - E(k, k - 1, k - 1)
    return IntersectionTensor(N)


def theta_pm_E(k: int, q: int, r: int) -> IntersectionTensor:
    _need(4 <= k <= 6 and q >= 4 and r in (2, k - 2), f"theta_pm_E needs 4 <= k <= 6, q >= 4, r in {{2, k-2}}")
    N = theta(_v(k, q, r)).entries + E(k, 1, 1) - E(k, 1, 2) - E(k, 2, 1) + E(k, 2, 2)
    return IntersectionTensor(N)


def block_L(k: int, q: int) -> IntersectionTensor:
    _need(k in (5, 6) and q >= 2, f"block_L needs k in {{5,6}} and q >= 2")
    N = np.full((k, k), q, dtype=np.int64)
    N[1:, 1:] = L(k - 1, q).entries
    return IntersectionTensor(N)


def theta_rX(k: int, q: int, r: int) -> IntersectionTensor:
    _need(k in (5, 6) and q >= 7 and r in (1, -1), f"theta_rX needs k in {{5,6}}, q >= 7, r = +-1")
    X = E(k, 1, k) - E(k, 1, 1) - E(k, k, k) + E(k, k, 1) + E(k, 2, k - 1) - E(k, 2, k - 2) + E(k, 3, k - 2) - E(k, 3, k - 1)
    return IntersectionTensor(theta([q] * (k - 1) + [q + r]).entries + r * X)


def k5_A(q: int, r: int) -> IntersectionTensor:
    _need(q >= 7 and r in (1, -1), "k5_A needs q >= 7, r = +-1")
    return IntersectionTensor(
        [
            [q + 2 * r, q, q - r, q, q],
            [q - r, q + 2 * r, q, q, q],
            [q, q, q + r, q, q],
            [q, q - r, q + r, q + r, q],
            [q, q, q, q, q + r],
        ]
    )


FAMILIES = {
    "k2": k2,
    "k2_W": k2_W,
    "k3": k3,
    "k3_W": k3_W,
    "other3": other3,
    "L": L,
    "theta_E": theta_E,
    "theta_pm_E": theta_pm_E,
    "block_L": block_L,
    "theta_rX": theta_rX,
    "k5_A": k5_A,
}


def named_arrays(family: str, **params) -> IntersectionTensor:
    """Look up a family by name, e.g. ``named_arrays("L", k=4, q=11)``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[family](**params)


def expected_multiset(family: str, **p) -> Counter | None:
    """Closed-form entry multiset for the families that state one."""
    k, q, r = p.get("k"), p.get("q"), p.get("r")
    if family == "L":
        return Counter({q + 2: 1, q + 1: k - 1, q - 1: k + 1, q: k * k - 2 * k - 1})
    if family == "theta_E":
        return Counter({q + 2: 1, q + 1: r * k - 2, q: k * k - r * k + 1})
    if family == "theta_pm_E":
        return Counter({q + 2: 2, q + 1: r * k - 3, q: k * k - r * k, q - 1: 1})
    if family == "theta_rX":
        return Counter({q + 2 * r: 1, q + r: k + 2, q: k * k - k - 7, q - r: 4})
    if family == "k3":
        return Counter({q + 2: 2, q + 1: 1, q: 2, q - 1: 3, q - 2: 1})
    return None


def expected_k_order(family: str, **p) -> int | None:
    """The |K| each family is claimed to have (None if no claim)."""
    if family == "L":
        return 1 if p["k"] >= 4 else None
    if family in ("k3", "theta_E", "theta_pm_E", "theta_rX", "k5_A", "other3", "block_L", "k2_W", "k3_W"):
        return 1
    if family == "k2":
        return 2
    return None
