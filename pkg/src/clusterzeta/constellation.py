"""Toric constellations, clusters and their proximity combinatorics.

A toric constellation in dimension three is a rooted tree whose edges carry
labels in ``{1, 2, 3}``: the child of ``P`` with label ``a`` is the point
obtained by blowing up ``P`` and moving to the chart that replaces the
``a``-th generator of ``P``'s cone by the sum of its generators.  Points are
numbered ``1..r`` in creation order, so a parent always has a smaller index
than its children.

A cluster attaches a multiplicity to every point.  Everything downstream
(numerical data, Euler characteristics, zeta functions, monomial ideals) is
derived from the tree and the multiplicities alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    Disconnected,
    DuplicateSiblingLabel,
    EqualLabels,
    IdealisticViolation,
    MultipleRoots,
    NonPositiveMultiplicity,
    ParentAfterChild,
    RootHasNoSwitchStatus,
)

Label = int
Vector = tuple[int, int, int]

LABELS: tuple[Label, Label, Label] = (1, 2, 3)
LABEL_PAIRS: tuple[tuple[Label, Label], ...] = ((1, 2), (1, 3), (2, 3))


def third_label(a: Label, b: Label) -> Label:
    """The label different from both ``a`` and ``b``."""
    if a == b:
        raise EqualLabels(f"labels must differ, got {a} twice")
    return 6 - a - b


def _check_label(a: object) -> Label:
    if a not in LABELS:
        raise ValueError(f"label must be 1, 2 or 3, got {a!r}")
    return a  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Constellations and clusters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constellation:
    """Labeled 3-nary tree on the points ``1..r`` (root is point 1).

    ``parents[j - 1]`` and ``labels[j - 1]`` describe point ``j``; both are
    ``None`` for the root.
    """

    parents: tuple[int | None, ...]
    labels: tuple[Label | None, ...]

    @property
    def r(self) -> int:
        return len(self.parents)

    @property
    def points(self) -> range:
        return range(1, self.r + 1)

    def parent(self, j: int) -> int | None:
        return self.parents[j - 1]

    def label(self, j: int) -> Label | None:
        return self.labels[j - 1]

    @cached_property
    def _children(self) -> dict[int, dict[Label, int]]:
        table: dict[int, dict[Label, int]] = {j: {} for j in self.points}
        for k, (p, lab) in enumerate(zip(self.parents, self.labels), start=1):
            if p is not None:
                table[p][lab] = k  # type: ignore[index]
        return table

    def children(self, j: int) -> dict[Label, int]:
        """Children of ``j`` keyed by edge label."""
        return dict(self._children[j])

    def child(self, j: int, a: Label) -> int | None:
        return self._children[j].get(a)

    def walk(self, i: int, word: Iterable[Label]) -> int | None:
        """Point reached from ``i`` by following the label word, if it exists."""
        cur: int | None = i
        for a in word:
            if cur is None:
                return None
            cur = self.child(cur, a)
        return cur

    def path_word(self, i: int, j: int) -> tuple[Label, ...] | None:
        """Labels on the tree path from ``i`` down to ``j`` (None if ``j`` is not below ``i``)."""
        word: list[Label] = []
        cur: int | None = j
        while cur is not None and cur != i:
            word.append(self.label(cur))  # type: ignore[arg-type]
            cur = self.parent(cur)
        if cur is None:
            return None
        return tuple(reversed(word))


def build_constellation(
    edges: Iterable[tuple[int, int, Label]], root_index: int = 1
) -> Constellation:
    """Build and validate a constellation from ``(child, parent, label)`` triples."""
    edge_list = list(edges)
    indices = {root_index} | {c for c, _, _ in edge_list}
    r = max(indices)
    parent_of: dict[int, tuple[int, Label]] = {}
    for child, parent, label in edge_list:
        _check_label(label)
        if child == root_index:
            raise MultipleRoots(f"root {root_index} also appears as a child")
        if child in parent_of:
            raise MultipleRoots(f"point {child} has two parents")
        if parent not in indices:
            raise Disconnected(f"point {child} hangs off unknown point {parent}")
        if parent >= child:
            raise ParentAfterChild(f"point {child} has parent {parent} >= {child}")
        parent_of[child] = (parent, label)
    missing = [j for j in range(1, r + 1) if j != root_index and j not in parent_of]
    if missing:
        raise MultipleRoots(f"points without parent besides the root: {missing}")
    if root_index != 1:
        raise ParentAfterChild("the root must be the first point")
    seen: set[tuple[int, Label]] = set()
    for child in range(2, r + 1):
        key = parent_of[child]
        if key in seen:
            raise DuplicateSiblingLabel(
                f"point {key[0]} has two children with label {key[1]}"
            )
        seen.add(key)
    parents = tuple([None] + [parent_of[j][0] for j in range(2, r + 1)])
    labels = tuple([None] + [parent_of[j][1] for j in range(2, r + 1)])
    return Constellation(parents, labels)


@dataclass(frozen=True)
class Cluster:
    """A constellation together with a multiplicity for each point."""

    constellation: Constellation
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.multiplicities) != self.constellation.r:
            raise ValueError("need exactly one multiplicity per point")
        if any(m < 0 for m in self.multiplicities):
            raise ValueError("multiplicities are nonnegative")

    @property
    def r(self) -> int:
        return self.constellation.r

    @property
    def points(self) -> range:
        return self.constellation.points

    def m(self, j: int) -> int:
        return self.multiplicities[j - 1]

    def require_positive(self) -> None:
        for j in self.points:
            if self.m(j) < 1:
                raise NonPositiveMultiplicity(f"m_{j} = {self.m(j)} must be >= 1")


def make_cluster(
    edges: Iterable[tuple[int, int, Label]], multiplicities: Sequence[int]
) -> Cluster:
    """Convenience constructor: edges as ``(child, parent, label)``, root 1."""
    return Cluster(build_constellation(edges), tuple(multiplicities))


# ---------------------------------------------------------------------------
# Cones, valuation vectors and proximity
# ---------------------------------------------------------------------------

Cone = tuple[Vector, Vector, Vector]
ROOT_CONE: Cone = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _vsum(vectors: Iterable[Vector]) -> Vector:
    x = y = z = 0
    for a, b, c in vectors:
        x, y, z = x + a, y + b, z + c
    return (x, y, z)


@dataclass(frozen=True)
class ProximityData:
    """Relations and toric data derived from a constellation.

    Relation pairs are ``(j, i)``: ``(j, i) in proximate`` means ``j -> i``.
    """

    cones: Mapping[int, Cone]
    valuation_vectors: Mapping[int, Vector]
    proximate: frozenset[tuple[int, int]]
    linearly_proximate: frozenset[tuple[int, int]]
    immediate: frozenset[tuple[int, int]]
    levels: Mapping[int, int]
    labels_below: Mapping[int, frozenset[Label]]

    def w(self, j: int) -> Vector:
        return self.valuation_vectors[j]

    def is_proximate(self, j: int, i: int) -> bool:
        return (j, i) in self.proximate

    def is_linearly_proximate(self, j: int, i: int) -> bool:
        return (j, i) in self.linearly_proximate

    def proximate_to(self, i: int) -> list[int]:
        """Points ``j`` with ``j -> i``, increasing."""
        return sorted(j for j, k in self.proximate if k == i)

    def proximate_of(self, j: int) -> list[int]:
        """Points ``i`` with ``j -> i``, increasing."""
        return sorted(i for k, i in self.proximate if k == j)

    def successors(self, i: int) -> list[int]:
        """Points ``k`` with ``k > i`` immediately (the children of ``i``)."""
        return sorted(k for k, p in self.immediate if p == i)


def derive_proximity(c: Constellation) -> ProximityData:
    """Cones by star subdivision, valuation vectors and all proximity relations."""
    cones: dict[int, Cone] = {}
    w: dict[int, Vector] = {}
    levels: dict[int, int] = {}
    below: dict[int, frozenset[Label]] = {}
    for j in c.points:
        p = c.parent(j)
        if p is None:
            cones[j] = ROOT_CONE
            levels[j] = 0
            below[j] = frozenset()
        else:
            a = c.label(j)
            gens = list(cones[p])
            gens[a - 1] = w[p]  # type: ignore[operator]
            cones[j] = (gens[0], gens[1], gens[2])
            levels[j] = levels[p] + 1
            below[j] = below[p] | {a}  # type: ignore[operator]
        w[j] = _vsum(cones[j])

    proximate: set[tuple[int, int]] = set()
    linear: set[tuple[int, int]] = set()
    immediate: set[tuple[int, int]] = set()
    for j in c.points:
        p = c.parent(j)
        if p is not None:
            immediate.add((j, p))
        for i in c.points:
            if i < j and w[i] in cones[j]:
                proximate.add((j, i))
        # linear proximity: walk the ancestors of j while the word stays a b^t
        word: list[Label] = []
        cur = j
        while c.parent(cur) is not None:
            word.append(c.label(cur))  # type: ignore[arg-type]
            cur = c.parent(cur)  # type: ignore[assignment]
            first, rest = word[-1], word[:-1]
            if len(set(rest)) <= 1 and first not in rest:
                linear.add((j, cur))
    return ProximityData(
        cones=cones,
        valuation_vectors=w,
        proximate=frozenset(proximate),
        linearly_proximate=frozenset(linear),
        immediate=frozenset(immediate),
        levels=levels,
        labels_below=below,
    )


# ---------------------------------------------------------------------------
# Numerical data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericalData:
    """``nu[j]`` and ``N[j]`` for ``j = 0..r``; index 0 is the strict transform."""

    nu: tuple[int, ...]
    N: tuple[int, ...]

    def pair(self, j: int) -> tuple[int, int]:
        """``(N_j, nu_j)``, the coefficients of the linear factor ``N_j s + nu_j``."""
        return (self.N[j], self.nu[j])


def numerical_data(cl: Cluster, px: ProximityData | None = None) -> NumericalData:
    """``N_j = m_j + sum_{j->i} N_i`` and ``nu_j = sum_{j->i} (nu_i - 1) + 3``."""
    cl.require_positive()
    px = px or derive_proximity(cl.constellation)
    nu = [1] * (cl.r + 1)
    N = [1] * (cl.r + 1)
    for j in cl.points:
        targets = px.proximate_of(j)
        N[j] = cl.m(j) + sum(N[i] for i in targets)
        nu[j] = sum(nu[i] - 1 for i in targets) + 3
        assert nu[j] == sum(px.w(j)), f"nu_{j} disagrees with |w_{j}|"
    return NumericalData(tuple(nu), tuple(N))


# ---------------------------------------------------------------------------
# Linear proximity inequalities
# ---------------------------------------------------------------------------


def M(cl: Cluster, px: ProximityData | None, i: int, a: Label, b: Label) -> int:
    """Sum of multiplicities of the existing points ``Q_i(a, b^t)``, ``t >= 0``."""
    if a == b:
        raise EqualLabels(f"M needs distinct labels, got ({a}, {b})")
    c = cl.constellation
    total = 0
    cur = c.child(i, a)
    while cur is not None:
        total += cl.m(cur)
        cur = c.child(cur, b)
    return total


def slack(cl: Cluster, i: int, a: Label, b: Label) -> int:
    """``m_i - M(i, a, b) - M(i, b, a)``."""
    return cl.m(i) - M(cl, None, i, a, b) - M(cl, None, i, b, a)


@dataclass(frozen=True)
class ValidationReport:
    """Slack of every linear proximity inequality and the overall verdict."""

    slacks: Mapping[tuple[int, tuple[Label, Label]], int]
    idealistic: bool

    @property
    def violations(self) -> list[tuple[int, tuple[Label, Label], int]]:
        return [(i, ab, s) for (i, ab), s in sorted(self.slacks.items()) if s < 0]


def validate_idealistic(cl: Cluster) -> ValidationReport:
    slacks = {(i, ab): slack(cl, i, *ab) for i in cl.points for ab in LABEL_PAIRS}
    return ValidationReport(slacks, all(s >= 0 for s in slacks.values()))


def rees_flags(
    cl: Cluster, px: ProximityData | None = None
) -> dict[int, tuple[int, bool]]:
    """``D_i = m_i^2 - sum_{j->i} m_j^2`` and whether ``Q_i`` gives a Rees valuation."""
    px = px or derive_proximity(cl.constellation)
    flags: dict[int, tuple[int, bool]] = {}
    for i in cl.points:
        d = cl.m(i) ** 2 - sum(cl.m(j) ** 2 for j in px.proximate_to(i))
        if d < 0:
            raise IdealisticViolation(f"D_{i} = {d} < 0")
        flags[i] = (d, d > 0)
    return flags


# ---------------------------------------------------------------------------
# Euclidean and bi-Euclidean clusters
# ---------------------------------------------------------------------------


def euclidean_blocks(n1: int, n2: int) -> list[tuple[int, int]] | None:
    """Blocks ``(n_{j+1}, h_j)`` of the Euclidean algorithm started at ``(n1, n2)``."""
    if not 0 < n2 <= n1:
        return None
    blocks: list[tuple[int, int]] = []
    a, b = n1, n2
    while b:
        h, rem = divmod(a, b)
        blocks.append((b, h))
        a, b = b, rem
    return blocks


def is_euclidean_chain(mults: Sequence[int], word: Sequence[Label]) -> bool:
    """Whether a chain with these multiplicities and edge labels is Euclidean.

    ``mults[0]`` is the starting point, ``mults[1:]`` the chain after it and
    ``word`` the labels of the ``len(mults) - 1`` edges.  The multiplicity
    ``n_{j+1}`` is repeated ``h_j`` times, and the labels read
    ``a b^{h_1} c^{h_2} b^{h_3} ...`` with the final exponent lowered by one.
    """
    if len(mults) < 2 or len(word) != len(mults) - 1:
        return False
    blocks = euclidean_blocks(mults[0], mults[1])
    if blocks is None:
        return False
    expected = [n for n, h in blocks for _ in range(h)]
    if list(mults[1:]) != expected:
        return False
    a = word[0]
    if len(word) == 1:
        return True
    b = word[1]
    if b == a:
        return False
    c = third_label(a, b)
    labels = [a] + [b if t % 2 == 0 else c for t, (_, h) in enumerate(blocks) for _ in range(h)]
    return list(word) == labels[:-1]


def proximate_path(cl: Cluster, i: int, start: int) -> list[int] | None:
    """Points proximate to ``Q_i`` in the subtree of ``start``, if they form a chain.

    ``start`` must lie on the ray of a child ``Q_i(a)``; the walk continues
    through edges with labels different from ``a``.  Returns None when the
    proximate points branch.
    """
    c = cl.constellation
    word = c.path_word(i, start)
    assert word, "start must lie strictly below i"
    a = word[0]
    path = [start]
    cur = start
    while True:
        nxt = [k for lab, k in c.children(cur).items() if lab != a]
        if len(nxt) > 1:
            return None
        if not nxt:
            return path
        cur = nxt[0]
        path.append(cur)


def euclidean_branch(cl: Cluster, i: int, k: int, top: int) -> bool:
    """Whether ``top`` at ``Q_i`` followed by the proximate chain from child ``k`` is Euclidean."""
    path = proximate_path(cl, i, k)
    if path is None:
        return False
    c = cl.constellation
    return is_euclidean_chain([top] + [cl.m(j) for j in path], [c.label(j) for j in path])  # type: ignore[misc]


def recognize_euclidean(cl: Cluster, px: ProximityData | None, i: int) -> bool:
    """Is the cluster Euclidean starting in ``Q_i`` (single child, chain of proximate points)?"""
    kids = list(cl.constellation.children(i).values())
    if len(kids) != 1:
        return False
    return euclidean_branch(cl, i, kids[0], cl.m(i))


def recognize_bi_euclidean(cl: Cluster, px: ProximityData | None, i: int) -> bool:
    """Is the cluster bi-Euclidean starting in ``Q_i``?

    ``Q_i`` has a single child ``Q_k = Q_i(a)`` from which two proximate
    branches leave, in directions ``b`` and ``c``.  Each branch, preceded by
    the reduced weights ``m_i - M_k(c, b)`` and ``M_k(b, c)`` (symmetrically
    for the other branch), must be a Euclidean chain, and ``Q_k`` must be
    saturated: ``M_k(b, c) + M_k(c, b) = m_k``.
    """
    c = cl.constellation
    kids = c.children(i)
    if len(kids) != 1:
        return False
    (a, k), = kids.items()
    branches = {lab: q for lab, q in c.children(k).items() if lab != a}
    if len(branches) != 2:
        return False
    b, cc = sorted(branches)
    mbc = M(cl, None, k, b, cc)
    mcb = M(cl, None, k, cc, b)
    if mbc + mcb != cl.m(k):
        return False
    for lab, own, other in ((b, mbc, mcb), (cc, mcb, mbc)):
        path = proximate_path(cl, i, branches[lab])
        if path is None:
            return False
        mults = [cl.m(i) - other, own] + [cl.m(j) for j in path]
        word = [a] + [c.label(j) for j in path]
        if not is_euclidean_chain(mults, word):  # type: ignore[arg-type]
            return False
    return True


def is_switch_point(cl: Cluster, px: ProximityData | None, q: int) -> bool:
    """``Q = P(a)`` is a switch point when it has a child ``Q(b)`` with ``b != a``."""
    c = cl.constellation
    a = c.label(q)
    if a is None:
        raise RootHasNoSwitchStatus("the root has no incoming label")
    return any(b != a for b in c.children(q))


# ---------------------------------------------------------------------------
# Random idealistic clusters
# ---------------------------------------------------------------------------


def random_idealistic_cluster(
    point_count: int,
    seed: int,
    *,
    max_slack: int = 3,
    chain_bias: float = 0.5,
) -> Cluster:
    """A pseudo-random idealistic cluster, a pure function of its arguments.

    The tree grows one point at a time; with probability ``chain_bias`` the new
    point extends the most recent point (when it still has a free label),
    otherwise the parent is uniform among points with a free label.  Then,
    in reverse creation order, ``m_i`` is the largest ``M(i,a,b) + M(i,b,a)``
    plus a uniform slack in ``[0, max_slack]`` (``[1, max_slack]`` when that
    maximum is 0, so every multiplicity is positive).
    """
    if point_count < 1:
        raise ValueError("point_count must be >= 1")
    rng = random.Random(seed)
    children: list[dict[Label, int]] = [{}]  # index j - 1
    edges: list[tuple[int, int, Label]] = []
    for j in range(2, point_count + 1):
        last = j - 1
        if rng.random() < chain_bias and len(children[last - 1]) < 3:
            parent = last
        else:
            parent = rng.choice([p for p in range(1, j) if len(children[p - 1]) < 3])
        label = rng.choice([a for a in LABELS if a not in children[parent - 1]])
        children[parent - 1][label] = j
        children.append({})
        edges.append((j, parent, label))
    constellation = build_constellation(edges)

    mults = [0] * point_count

    def ray(i: int, a: Label, b: Label) -> int:
        total = 0
        cur = children[i - 1].get(a)
        while cur is not None:
            total += mults[cur - 1]
            cur = children[cur - 1].get(b)
        return total

    for i in range(point_count, 0, -1):
        base = max(ray(i, a, b) + ray(i, b, a) for a, b in LABEL_PAIRS)
        low = 1 if base == 0 else 0
        mults[i - 1] = base + rng.randint(low, max(low, max_slack))
    return Cluster(constellation, tuple(mults))


def iter_points_below(c: Constellation, i: int) -> Iterator[int]:
    """All points strictly below ``i`` in the tree."""
    for j in c.points:
        if j != i and c.path_word(i, j) is not None:
            yield j


__all__ = [
    "LABELS",
    "LABEL_PAIRS",
    "Cluster",
    "Cone",
    "Constellation",
    "Label",
    "NumericalData",
    "ProximityData",
    "ValidationReport",
    "M",
    "build_constellation",
    "derive_proximity",
    "euclidean_blocks",
    "euclidean_branch",
    "is_euclidean_chain",
    "is_switch_point",
    "iter_points_below",
    "make_cluster",
    "numerical_data",
    "proximate_path",
    "random_idealistic_cluster",
    "recognize_bi_euclidean",
    "recognize_euclidean",
    "rees_flags",
    "slack",
    "third_label",
    "validate_idealistic",
]
