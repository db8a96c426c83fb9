"""Euler characteristics of the strata of a log resolution of a general surface.

For a cluster with points ``Q_1..Q_r`` the divisors of the resolution are the
strict transform ``E_0`` of a general member of the ideal and the exceptional
divisors ``E_1..E_r``.  For an index set ``I`` the open stratum ``E_I°``
consists of the points lying on exactly the divisors in ``I``.  Only five
shapes of ``I`` can have a nonzero Euler characteristic; each has a closed
formula in the multiplicities and the proximity relations.

The module also provides the ``D - R + T`` decomposition of ``χ(E_i°)`` and a
sign classification that names the local configuration responsible for a
vanishing or negative value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Mapping

from .constellation import (
    LABEL_PAIRS,
    LABELS,
    Cluster,
    Label,
    M,
    NumericalData,
    ProximityData,
    derive_proximity,
    euclidean_branch,
    numerical_data,
    proximate_path,
    third_label,
)
from .errors import NotProximate

Key = tuple[int, ...]

# (#B_i, #A_i) -> T; the only combinations that can occur.
TOPOLOGICAL_TERM: Mapping[tuple[int, int], int] = {
    (0, 0): 3,
    (0, 1): 2,
    (0, 2): 1,
    (0, 3): 0,
    (1, 0): 1,
    (1, 1): 0,
    (2, 0): 0,
    (3, 0): 0,
}


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def _linear_excess(cl: Cluster, px: ProximityData, i: int, j: int) -> int:
    """``m_j - sum_{k -> i, k linearly proximate to j} m_k`` (requires ``j -> i``).

    This is the number of points in which the curve ``C_j`` cut out on the
    final ``E_i`` meets ``E_j``.
    """
    return cl.m(j) - sum(
        cl.m(k) for k in px.proximate_to(i) if px.is_linearly_proximate(k, j)
    )


def a_set(px: ProximityData, i: int) -> list[int]:
    """``A_i``: children of ``Q_i`` sharing no divisor with ``Q_i`` besides ``E_i``."""
    targets = px.proximate_of(i)
    return [
        k
        for k in px.successors(i)
        if not any(px.is_proximate(k, l) for l in targets)
    ]


def b_set(px: ProximityData, i: int) -> list[int]:
    """``B_i``: the points that ``Q_i`` is proximate to."""
    return px.proximate_of(i)


def _require_proximate(px: ProximityData, j: int, i: int) -> None:
    if not px.is_proximate(j, i):
        raise NotProximate(f"Q_{j} is not proximate to Q_{i}")


def _context(
    cl: Cluster, px: ProximityData | None
) -> ProximityData:
    return px if px is not None else derive_proximity(cl.constellation)


# ---------------------------------------------------------------------------
# The five nonzero shapes
# ---------------------------------------------------------------------------


def chi_single(
    cl: Cluster, px: ProximityData | None, nd: NumericalData | None, i: int
) -> int:
    """``χ(E_i°)`` for an exceptional divisor on its own."""
    px = _context(cl, px)
    m = cl.m(i)
    near = px.proximate_to(i)
    targets = px.proximate_of(i)
    nb = len(targets)
    return (
        3
        + m * (m - 3)
        - sum(cl.m(j) * (cl.m(j) - 1) for j in near)
        + sum(_linear_excess(cl, px, i, j) for j in near)
        + sum(_linear_excess(cl, px, j, i) for j in targets)
        - len(a_set(px, i))
        - 2 * nb
        + comb(nb, 2)
    )


def chi_pair_exc(cl: Cluster, px: ProximityData | None, i: int, j: int) -> int:
    """``χ(E_{i,j}°)`` for exceptional ``i, j`` with ``j -> i``."""
    px = _context(cl, px)
    _require_proximate(px, j, i)
    a_ij = [k for k in px.successors(j) if px.is_proximate(k, i)]
    b_ij = [k for k in px.proximate_of(j) if k != i]
    c_ij = [
        k
        for k in a_ij
        if any(l != i and px.is_proximate(j, l) for l in px.proximate_of(k))
    ]
    return 2 - _linear_excess(cl, px, i, j) - len(a_ij) - len(b_ij) + len(c_ij)


def chi_strict_pair(cl: Cluster, px: ProximityData | None, i: int) -> int:
    """``χ(E_{0,i}°)``: the curve cut out on ``E_i`` by the strict transform."""
    px = _context(cl, px)
    m = cl.m(i)
    near = px.proximate_to(i)
    return (
        m * (3 - m)
        + sum(cl.m(j) * (cl.m(j) - 1) for j in near)
        - sum(_linear_excess(cl, px, i, j) for j in near)
        - sum(_linear_excess(cl, px, j, i) for j in px.proximate_of(i))
    )


def chi_strict_triple(cl: Cluster, px: ProximityData | None, i: int, j: int) -> int:
    """``χ(E_{0,i,j}°)`` for ``j -> i``: points where the strict transform meets ``E_i ∩ E_j``."""
    px = _context(cl, px)
    _require_proximate(px, j, i)
    return _linear_excess(cl, px, i, j)


def chi_triple_exc(
    cl: Cluster, px: ProximityData | None, i: int, j: int, k: int
) -> int:
    """``χ(E_{i,j,k}°)`` for ``k -> i`` and ``k -> j``: the triple point survives unless blown up."""
    px = _context(cl, px)
    _require_proximate(px, k, i)
    _require_proximate(px, k, j)
    blown_up = [
        l
        for l in cl.points
        if px.is_proximate(l, i) and px.is_proximate(l, j) and px.is_proximate(l, k)
    ]
    return 1 - len(blown_up)


@dataclass(frozen=True)
class StratumTable:
    """``χ(E_I°)`` for every candidate index set ``I`` (sorted tuples)."""

    entries: Mapping[Key, int]
    numerical: NumericalData

    def chi(self, *indices: int) -> int:
        return self.entries.get(tuple(sorted(indices)), 0)

    def single(self, i: int) -> int:
        return self.entries[(i,)]

    @property
    def r(self) -> int:
        return len(self.numerical.N) - 1

    def containing(self, i: int) -> dict[Key, int]:
        return {key: v for key, v in self.entries.items() if i in key}


def candidate_keys(cl: Cluster, px: ProximityData) -> list[Key]:
    """The index sets whose stratum can have nonzero Euler characteristic."""
    keys: list[Key] = []
    for i in cl.points:
        keys.append((i,))
        keys.append((0, i))
    for j, i in sorted(px.proximate, key=lambda p: (p[1], p[0])):
        keys.append((i, j))
        keys.append((0, i, j))
    for k in cl.points:
        targets = px.proximate_of(k)
        for x in range(len(targets)):
            for y in range(x + 1, len(targets)):
                keys.append((targets[x], targets[y], k))
    return sorted(set(keys), key=lambda key: (len(key), key))


def strata_table(cl: Cluster, px: ProximityData | None = None) -> StratumTable:
    """All nonzero-candidate strata with their Euler characteristics."""
    cl.require_positive()
    px = _context(cl, px)
    nd = numerical_data(cl, px)
    entries: dict[Key, int] = {}
    for key in candidate_keys(cl, px):
        if len(key) == 1:
            entries[key] = chi_single(cl, px, nd, key[0])
        elif key[0] == 0 and len(key) == 2:
            entries[key] = chi_strict_pair(cl, px, key[1])
        elif len(key) == 2:
            entries[key] = chi_pair_exc(cl, px, key[0], key[1])
        elif key[0] == 0:
            entries[key] = chi_strict_triple(cl, px, key[1], key[2])
        else:
            entries[key] = chi_triple_exc(cl, px, *key)
    return StratumTable(entries, nd)


# ---------------------------------------------------------------------------
# D - R + T
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DRT:
    """The decomposition ``χ(E_i°) = D - R + T`` at one point."""

    D: int
    R: int
    T: int
    r: Mapping[tuple[Label, Label], int]
    r_hat: Mapping[tuple[Label, Label], int]

    @property
    def chi(self) -> int:
        return self.D - self.R + self.T


def drt(cl: Cluster, px: ProximityData | None, i: int) -> DRT:
    px = _context(cl, px)
    m = cl.m(i)
    D = m * m - sum(cl.m(j) ** 2 for j in px.proximate_to(i))
    below = px.labels_below[i]
    r = {(a, b): m - M(cl, px, i, a, b) - M(cl, px, i, b, a) for a, b in LABEL_PAIRS}
    r_hat = {
        (a, b): (0 if third_label(a, b) in below else v) for (a, b), v in r.items()
    }
    nb, na = len(b_set(px, i)), len(a_set(px, i))
    if (nb, na) not in TOPOLOGICAL_TERM:
        raise AssertionError(f"(#B, #A) = ({nb}, {na}) at Q_{i} is not an admissible combination")
    T = 3 - na - 2 * nb + comb(nb, 2)
    return DRT(D, sum(r_hat.values()), T, r, r_hat)


# ---------------------------------------------------------------------------
# Sign classification
# ---------------------------------------------------------------------------


class Sign(str, Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    NEGATIVE = "Negative"


NEGATIVE_PATTERNS = ("C1", "C2", "C3")
ZERO_PATTERNS = ("C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11")


def _family(pattern: str) -> str:
    return pattern.rstrip("AB")


@dataclass(frozen=True)
class SignClassification:
    chi: int
    sign: Sign
    matched_patterns: tuple[str, ...] = field(default_factory=tuple)

    @property
    def consistent(self) -> bool:
        """Whether the matched patterns account exactly for the sign."""
        families = {_family(p) for p in self.matched_patterns}
        negative = bool(families & set(NEGATIVE_PATTERNS))
        zero = bool(families & set(ZERO_PATTERNS))
        return negative == (self.sign is Sign.NEGATIVE) and zero == (
            self.sign is Sign.ZERO
        )


def _ray_count(cl: Cluster, i: int, a: Label, b: Label) -> int:
    """``#{t >= 0 : Q_i(a, b^t) exists}``."""
    c = cl.constellation
    n, cur = 0, c.child(i, a)
    while cur is not None:
        n += 1
        cur = c.child(cur, b)
    return n


def _equal_child_patterns(cl: Cluster, px: ProximityData, i: int) -> list[str]:
    """C1-C3 and C5-C7: ``Q_i`` has a child of the same multiplicity."""
    m = cl.m(i)
    below = px.labels_below[i]
    found: list[str] = []
    for a, k in cl.constellation.children(i).items():
        if cl.m(k) != m:
            continue
        if not below:
            if m >= 3:
                found.append("C1")
            elif m == 2:
                found.append("C5")
        elif a in below:
            found.append("C7")
        elif len(below) == 1:
            found.append("C2" if m >= 2 else "C6")
        else:
            found.append("C3")
    return found


def _childless_pattern(cl: Cluster, px: ProximityData, i: int) -> list[str]:
    """C4: a leaf of multiplicity one lying on one or two earlier divisors."""
    if cl.m(i) == 1 and not px.successors(i) and len(px.proximate_of(i)) in (1, 2):
        return ["C4"]
    return []


def _two_euclidean_branches(cl: Cluster, px: ProximityData, i: int) -> list[str]:
    """C8: two children splitting ``m_i``, each starting a Euclidean chain of weight ``m_i``."""
    kids = cl.constellation.children(i)
    if len(kids) != 2:
        return []
    (a, ka), (b, kb) = sorted(kids.items())
    m = cl.m(i)
    if cl.m(ka) + cl.m(kb) != m:
        return []
    if not (euclidean_branch(cl, i, ka, m) and euclidean_branch(cl, i, kb, m)):
        return []
    below = px.labels_below[i]
    if below in ({a}, {b}):
        return ["C8A"]
    if len(below) >= 2:
        return ["C8B"]
    return []


def _single_child_drop_one(cl: Cluster, px: ProximityData, i: int) -> list[str]:
    """C9 and C10: a single child of multiplicity ``m_i - 1`` followed by ones."""
    kids = cl.constellation.children(i)
    m = cl.m(i)
    if len(kids) != 1 or m < 2:
        return []
    (a, p), = kids.items()
    if cl.m(p) != m - 1:
        return []
    below = px.labels_below[i]
    onward = {lab: q for lab, q in cl.constellation.children(p).items() if lab != a}
    found: list[str] = []
    if len(onward) == 1:
        (b, u), = onward.items()
        c = third_label(a, b)
        path = proximate_path(cl, i, u)
        if (
            path is not None
            and len(path) == m - 1
            and all(cl.m(q) == 1 for q in path)
            and all(cl.constellation.label(q) == c for q in path[1:])
        ):
            if below == {c}:
                found.append("C9A")
            elif below == {b, c}:
                found.append("C9B")
    elif len(onward) == 2:
        b, c = sorted(onward)
        if _ray_count(cl, p, b, c) + _ray_count(cl, p, c, b) == m - 1 and below == {b, c}:
            found.append("C10")
    return found


def _unit_and_drop_one(cl: Cluster, px: ProximityData, i: int) -> list[str]:
    """C11: children of multiplicity 1 and ``m_i - 1`` with the drawn continuations."""
    kids = cl.constellation.children(i)
    if len(kids) != 2:
        return []
    m = cl.m(i)
    below = px.labels_below[i]
    found: list[str] = []
    for a, b in ((x, y) for x in kids for y in kids if x != y):
        p = kids[b]
        if cl.m(kids[a]) != 1 or cl.m(p) != m - 1:
            continue
        c = third_label(a, b)
        if _ray_count(cl, p, c, a) != m - 1:
            continue
        if not 1 <= _ray_count(cl, i, a, c) <= m:
            continue
        if below == {a}:
            found.append("C11A")
        elif below == {a, c}:
            found.append("C11B")
    return sorted(set(found))


def match_patterns(cl: Cluster, px: ProximityData | None, i: int) -> tuple[str, ...]:
    """Every negative (C1-C3) and zero (C4-C11) configuration at ``Q_i``, up to label permutation."""
    px = _context(cl, px)
    found = (
        _equal_child_patterns(cl, px, i)
        + _childless_pattern(cl, px, i)
        + _two_euclidean_branches(cl, px, i)
        + _single_child_drop_one(cl, px, i)
        + _unit_and_drop_one(cl, px, i)
    )
    order = {f"C{n}": n for n in range(1, 12)}
    return tuple(sorted(set(found), key=lambda p: (order[_family(p)], p)))


def classify_sign(cl: Cluster, px: ProximityData | None, i: int) -> SignClassification:
    px = _context(cl, px)
    chi = chi_single(cl, px, None, i)
    sign = Sign.POSITIVE if chi > 0 else Sign.ZERO if chi == 0 else Sign.NEGATIVE
    return SignClassification(chi, sign, match_patterns(cl, px, i))


def lemma_finite_predicate(cl: Cluster, px: ProximityData | None, i: int) -> bool:
    """At least three points on every pair of rays ``Q_i(a, b^t)``, ``Q_i(b, a^t)``."""
    return all(
        _ray_count(cl, i, a, b) + _ray_count(cl, i, b, a) >= 3 for a, b in LABEL_PAIRS
    )


__all__ = [
    "DRT",
    "LABELS",
    "NEGATIVE_PATTERNS",
    "Sign",
    "SignClassification",
    "StratumTable",
    "TOPOLOGICAL_TERM",
    "ZERO_PATTERNS",
    "a_set",
    "b_set",
    "candidate_keys",
    "chi_pair_exc",
    "chi_single",
    "chi_strict_pair",
    "chi_strict_triple",
    "chi_triple_exc",
    "classify_sign",
    "drt",
    "lemma_finite_predicate",
    "match_patterns",
    "strata_table",
]
