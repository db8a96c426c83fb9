"""The complete monomial ideal of a cluster and its Newton polyhedron.

Each point ``Q_j`` defines a monomial valuation with weight vector ``w_j``;
the ideal of the cluster contains ``x^a`` exactly when ``<w_j, a> >= v_j`` for
all ``j``, where ``v_j = N_j``.  Because every ``w_j`` is at least ``(1,1,1)``
componentwise, the monomials ``x^B, y^B, z^B`` with ``B = max_j v_j`` already
lie in the ideal, so all minimal generators live in the box ``[0, B]^3``.

The lattice region is scanned one ``x``-row at a time: for each ``(x, y)`` the
least admissible ``z`` is computed from the inequalities, an ``O(B^2 r)`` pass
over integer arrays that keeps only ``O(B r)`` values in memory.

Facets are decided separately and exactly, by clipping polygons with
rationals, so they need no bounding box at all.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .constellation import Cluster, Vector, derive_proximity, numerical_data, rees_flags
from .errors import BoundOverflow

DEFAULT_BOUND_CEILING = 10_000
BOUND_ENV_VAR = "CLUSTERZETA_BOUND_CEILING"

Inequality = tuple[Vector, int]  # (w_j, v_j): <w_j, a> >= v_j


def bound_ceiling() -> int:
    raw = os.environ.get(BOUND_ENV_VAR)
    return int(raw) if raw else DEFAULT_BOUND_CEILING


def defining_inequalities(cl: Cluster) -> list[Inequality]:
    px = derive_proximity(cl.constellation)
    nd = numerical_data(cl, px)
    return [(px.w(j), nd.N[j]) for j in cl.points]


def _bound(inequalities: Sequence[Inequality]) -> int:
    B = max(v for _, v in inequalities)
    if B > bound_ceiling():
        raise BoundOverflow(f"bounding box side {B} exceeds ceiling {bound_ceiling()}")
    return B


def _row_floors(inequalities: Sequence[Inequality], x: int, ys: np.ndarray) -> np.ndarray:
    """Least ``z >= 0`` admitted by each inequality along the row ``(x, y)``, ``y`` in ``ys``.

    Shape ``(len(inequalities), len(ys))``.
    """
    out = np.empty((len(inequalities), len(ys)), dtype=np.int64)
    for k, ((w1, w2, w3), v) in enumerate(inequalities):
        need = v - w1 * x - w2 * ys
        out[k] = np.maximum(0, -(-need // w3))  # ceil division
    return out


def _staircase(inequalities: Sequence[Inequality], B: int) -> list[Vector]:
    """Minimal lattice points of the region, scanning the box one ``x``-row at a time.

    ``(x, y, zmin(x, y))`` is minimal iff dropping ``x`` or ``y`` by one
    forces a strictly larger ``z``.
    """
    ys = np.arange(B + 1, dtype=np.int64)
    big = np.iinfo(np.int64).max
    prev = np.full(B + 1, big, dtype=np.int64)
    out: list[Vector] = []
    for x in range(B + 1):
        row = _row_floors(inequalities, x, ys).max(axis=0)
        down = np.concatenate(([big], row[:-1]))
        for y in np.nonzero((row < prev) & (row < down))[0]:
            out.append((x, int(y), int(row[y])))
        prev = row
    return out


def grlex_key(a: Vector) -> tuple[int, int, int, int]:
    """Graded lexicographic order: total degree first, then ``x``, ``y``, ``z`` descending."""
    return (sum(a), -a[0], -a[1], -a[2])


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple[Vector, ...]
    defining_inequalities: tuple[Inequality, ...]

    def contains(self, a: Vector) -> bool:
        return any(all(g[k] <= a[k] for k in range(3)) for g in self.generators)


def ideal_generators(cl: Cluster) -> MonomialIdeal:
    """Minimal monomial generators of the complete ideal of the cluster, graded-lex ordered."""
    ineqs = defining_inequalities(cl)
    B = _bound(ineqs)
    gens = sorted(_staircase(ineqs, B), key=grlex_key)
    return MonomialIdeal(tuple(gens), tuple(ineqs))


def region_contains(inequalities: Iterable[Inequality], a: Vector) -> bool:
    return all(sum(wk * ak for wk, ak in zip(w, a)) >= v for w, v in inequalities)


# ---------------------------------------------------------------------------
# Newton polyhedron: essential inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FacetStatus:
    """How inequality ``j`` sits on the region ``{a >= 0 : <w_k, a> >= v_k for all k}``.

    ``face`` lists the vertices of the polygon the plane ``<w_j, a> = v_j``
    cuts out of the region; the inequality is essential (a facet) exactly
    when that polygon is two-dimensional.  ``witness`` is a lattice point of
    the box admitted once inequality ``j`` alone is dropped; it is only
    searched for when requested, and its existence implies essentiality but
    not conversely.
    """

    j: int
    inequality: Inequality
    essential: bool
    face: tuple[tuple[Fraction, Fraction, Fraction], ...]
    witness: Vector | None
    D: int
    is_rees: bool

    @property
    def agrees(self) -> bool:
        return self.essential == self.is_rees


@dataclass(frozen=True)
class NewtonPolyhedron:
    statuses: tuple[FacetStatus, ...]
    witnesses_searched: bool

    @property
    def essential_facets(self) -> tuple[int, ...]:
        return tuple(s.j for s in self.statuses if s.essential)

    @property
    def rees(self) -> tuple[int, ...]:
        return tuple(s.j for s in self.statuses if s.is_rees)

    @property
    def hard_contradictions(self) -> tuple[FacetStatus, ...]:
        """A facet, or a lattice witness, for an inequality with ``D_j = 0``."""
        return tuple(
            s for s in self.statuses if not s.is_rees and (s.essential or s.witness is not None)
        )

    @property
    def degeneracies(self) -> tuple[FacetStatus, ...]:
        """``D_j > 0`` but the plane of inequality ``j`` does not cut out a facet."""
        return tuple(s for s in self.statuses if s.is_rees and not s.essential)


FPoint = tuple[Fraction, Fraction, Fraction]


def _dot(w: Sequence[int], p: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(w, p)), Fraction(0))


def _clip(polygon: list[FPoint], w: Vector, v: int) -> list[FPoint]:
    """Keep the part of a convex planar polygon where ``<w, a> >= v``."""
    out: list[FPoint] = []
    n = len(polygon)
    for i in range(n):
        p, q = polygon[i], polygon[(i + 1) % n]
        fp, fq = _dot(w, p) - v, _dot(w, q) - v
        if fp >= 0:
            out.append(p)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            t = fp / (fp - fq)
            out.append(tuple(pi + t * (qi - pi) for pi, qi in zip(p, q)))  # type: ignore[misc]
    deduped: list[FPoint] = []
    for p in out:
        if not deduped or deduped[-1] != p:
            deduped.append(p)
    while len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def _is_two_dimensional(points: Sequence[FPoint]) -> bool:
    if len(points) < 3:
        return False
    p0 = points[0]
    for k in range(1, len(points)):
        u = [a - b for a, b in zip(points[k], p0)]
        for m in range(k + 1, len(points)):
            v = [a - b for a, b in zip(points[m], p0)]
            if u[1] * v[2] - u[2] * v[1] or u[2] * v[0] - u[0] * v[2] or u[0] * v[1] - u[1] * v[0]:
                return True
    return False


def facet_polygon(inequalities: Sequence[Inequality], k: int) -> list[FPoint]:
    """The polygon cut out of the region by the plane of inequality ``k`` (exact)."""
    w, v = inequalities[k]
    # the plane meets the closed orthant in a triangle because w > 0
    polygon: list[FPoint] = [
        tuple(Fraction(v, w[i]) if i == axis else Fraction(0) for i in range(3))  # type: ignore[misc]
        for axis in range(3)
    ]
    for m, (wm, vm) in enumerate(inequalities):
        if m != k:
            polygon = _clip(polygon, wm, vm)
            if not polygon:
                break
    return polygon


def _lattice_witnesses(inequalities: Sequence[Inequality], B: int) -> list[Vector | None]:
    """Per inequality, a box point violating it alone (first found in row order)."""
    r = len(inequalities)
    found: list[Vector | None] = [None] * r
    ys = np.arange(B + 1, dtype=np.int64)
    for x in range(B + 1):
        floors = _row_floors(inequalities, x, ys)
        if r == 1:
            relaxed = np.zeros((1, B + 1), dtype=np.int64)
        else:
            order = np.argsort(floors, axis=0, kind="stable")
            top = np.take_along_axis(floors, order[-1:], axis=0)[0]
            second = np.take_along_axis(floors, order[-2:-1], axis=0)[0]
            relaxed = np.where(np.arange(r)[:, None] == order[-1][None, :], second, top)
        for k in range(r):
            if found[k] is None:
                gap = np.nonzero(relaxed[k] < floors[k])[0]
                if len(gap):
                    y = int(gap[0])
                    found[k] = (x, y, int(relaxed[k][y]))
        if all(f is not None for f in found):
            break
    return found


def newton_polyhedron(cl: Cluster, *, witnesses: bool = True) -> NewtonPolyhedron:
    """Mark each defining inequality essential when its plane cuts out a facet of the region.

    The facet test clips polygons with exact rationals and needs no lattice
    bound.  With ``witnesses=True`` a lattice witness is also searched in the
    box ``[0, B]^3``, which raises ``BoundOverflow`` beyond the ceiling.
    """
    ineqs = defining_inequalities(cl)
    flags = rees_flags(cl)
    found: list[Vector | None] = [None] * len(ineqs)
    if witnesses:
        found = _lattice_witnesses(ineqs, _bound(ineqs))
    statuses = []
    for k, j in enumerate(cl.points):
        face = facet_polygon(ineqs, k)
        D, rees = flags[j]
        statuses.append(
            FacetStatus(j, ineqs[k], _is_two_dimensional(face), tuple(face), found[k], D, rees)
        )
    return NewtonPolyhedron(tuple(statuses), witnesses)


# ---------------------------------------------------------------------------
# Completeness and general elements
# ---------------------------------------------------------------------------


def completeness_witness(generators: Iterable[Vector], cl: Cluster) -> Vector | None:
    """A lattice point of the cluster's region outside the ideal generated by ``generators``."""
    gens = [tuple(g) for g in generators]
    for corner in ideal_generators(cl).generators:
        if not any(all(g[k] <= corner[k] for k in range(3)) for g in gens):
            return corner
    return None


def is_complete(generators: Iterable[Vector], cl: Cluster) -> bool:
    """Whether the monomial ideal generated by ``generators`` contains the whole region."""
    return completeness_witness(generators, cl) is None


Term = tuple[Vector, Fraction]


def general_element(cl: Cluster, seed: int) -> list[Term]:
    """One term per minimal generator with pseudo-random nonzero integer coefficients.

    Genericity is not certified; the coefficients are drawn from
    ``{-9..9} \\ {0}`` by a generator seeded with ``seed``.
    """
    rng = random.Random(seed)
    out: list[Term] = []
    for a in ideal_generators(cl).generators:
        c = 0
        while c == 0:
            c = rng.randint(-9, 9)
        out.append((a, Fraction(c)))
    return out


def render_monomial(a: Vector) -> str:
    parts = []
    for var, e in zip("xyz", a):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f"{var}^{e}")
    return "*".join(parts) if parts else "1"


def render_polynomial(terms: Iterable[Term]) -> str:
    """``x^6+y^3-x*y*z`` style rendering."""
    pieces: list[str] = []
    for a, c in terms:
        mono = render_monomial(a)
        mag = abs(c)
        body = mono if mag == 1 else f"{mag}*{mono}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("-" if c < 0 else "+") + body)
    return "".join(pieces) if pieces else "0"


__all__ = [
    "BOUND_ENV_VAR",
    "DEFAULT_BOUND_CEILING",
    "FacetStatus",
    "MonomialIdeal",
    "NewtonPolyhedron",
    "bound_ceiling",
    "completeness_witness",
    "defining_inequalities",
    "facet_polygon",
    "general_element",
    "grlex_key",
    "ideal_generators",
    "is_complete",
    "newton_polyhedron",
    "region_contains",
    "render_monomial",
    "render_polynomial",
]
