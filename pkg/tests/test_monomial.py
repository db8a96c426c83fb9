from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterzeta.constellation import random_idealistic_cluster, rees_flags
from clusterzeta.errors import BoundOverflow
from clusterzeta.fixtures import (
    FIVE_POINT_GENERATORS,
    IDEAL_21_GENERATORS,
    IDEAL_28_GENERATORS,
    fixture,
    parse_monomials,
)
from clusterzeta.monomial import (
    BOUND_ENV_VAR,
    completeness_witness,
    defining_inequalities,
    facet_polygon,
    general_element,
    grlex_key,
    ideal_generators,
    is_complete,
    newton_polyhedron,
    region_contains,
    render_monomial,
    render_polynomial,
)

# the general element printed for the five-point example, term by term
FIVE_POINT_ELEMENT = "x^6+y^3+z^4+x^3y+x^2y^2+yz^2+y^2z+x^3z+xz^2-xyz"


def brute_force_generators(cl) -> set[tuple[int, int, int]]:
    """Minimal lattice points of the region, by plain enumeration of the box."""
    ineqs = defining_inequalities(cl)
    B = max(v for _, v in ineqs)
    inside = {
        a for a in itertools.product(range(B + 1), repeat=3) if region_contains(ineqs, a)
    }
    return {
        a
        for a in inside
        if not any(
            a[k] > 0 and tuple(a[i] - (i == k) for i in range(3)) in inside for k in range(3)
        )
    }


# -- minimal generators ------------------------------------------------------------------


def test_five_point_generators(five_point):
    ideal = ideal_generators(five_point)
    assert set(ideal.generators) == parse_monomials(FIVE_POINT_GENERATORS)
    assert len(ideal.generators) == 10


@pytest.mark.parametrize(
    "name, printed, count",
    [("ideal_21", IDEAL_21_GENERATORS, 21), ("ideal_28", IDEAL_28_GENERATORS, 28)],
)
def test_printed_ideals(name, printed, count):
    gens = ideal_generators(fixture(name)).generators
    assert len(gens) == count
    assert set(gens) == parse_monomials(printed)


def test_quadric_cone_generators_are_all_quadrics():
    gens = ideal_generators(fixture("single_m2")).generators
    assert set(gens) == {a for a in itertools.product(range(3), repeat=3) if sum(a) == 2}


def test_generators_are_grlex_sorted(five_point):
    gens = ideal_generators(five_point).generators
    assert list(gens) == sorted(gens, key=grlex_key)
    assert gens[0] == (1, 1, 1)


def test_bound_ceiling_from_environment(monkeypatch, five_point):
    monkeypatch.setenv(BOUND_ENV_VAR, "5")
    with pytest.raises(BoundOverflow):
        ideal_generators(five_point)
    with pytest.raises(BoundOverflow):
        newton_polyhedron(five_point)
    # the exact facet test needs no box
    assert newton_polyhedron(five_point, witnesses=False).essential_facets == (1, 2, 3, 4, 5)


@settings(max_examples=40, deadline=None)
@given(st.builds(random_idealistic_cluster, st.integers(1, 5), st.integers(0, 10**6)))
def test_generators_match_brute_force(cl):
    if max(v for _, v in defining_inequalities(cl)) > 25:
        return
    assert set(ideal_generators(cl).generators) == brute_force_generators(cl)


@settings(max_examples=80, deadline=None)
@given(st.builds(random_idealistic_cluster, st.integers(1, 6), st.integers(0, 10**6)))
def test_generators_sound_minimal_complete(cl):
    ideal = ideal_generators(cl)
    gens = ideal.generators
    ineqs = ideal.defining_inequalities
    assert all(region_contains(ineqs, g) for g in gens)
    for g, h in itertools.permutations(gens, 2):
        assert not all(g[k] <= h[k] for k in range(3))
    assert is_complete(gens, cl)


# -- completeness ----------------------------------------------------------------------------


def test_completeness_of_five_point_ideal(five_point):
    gens = ideal_generators(five_point).generators
    assert is_complete(gens, five_point)
    without = [g for g in gens if g != (1, 1, 1)]
    assert not is_complete(without, five_point)
    assert completeness_witness(without, five_point) == (1, 1, 1)


def test_completeness_of_maximal_ideal():
    assert is_complete([(1, 0, 0), (0, 1, 0), (0, 0, 1)], fixture("single_m1"))


def test_contains(five_point):
    ideal = ideal_generators(five_point)
    assert ideal.contains((2, 2, 2))
    assert not ideal.contains((5, 0, 0))


# -- Newton polyhedron facets ------------------------------------------------------------------


def test_five_point_facets(five_point):
    poly = newton_polyhedron(five_point)
    assert poly.essential_facets == (1, 2, 3, 4, 5) == poly.rees
    assert not poly.degeneracies and not poly.hard_contradictions
    # the plane x + y + z = 3 cuts out a genuine polygon carrying several generators
    face = facet_polygon(defining_inequalities(five_point), 0)
    assert len(face) >= 3 and all(sum(p) == 3 for p in face)
    on_plane = [g for g in ideal_generators(five_point).generators if sum(g) == 3]
    assert len(on_plane) >= 4


def test_chain_3_3_first_inequality_is_redundant():
    poly = newton_polyhedron(fixture("chain_3_3"))
    first = poly.statuses[0]
    assert first.D == 0 and not first.essential and first.witness is None
    assert poly.essential_facets == (2,)


def test_single_point_has_one_facet():
    poly = newton_polyhedron(fixture("single_m2"))
    (status,) = poly.statuses
    assert status.essential and status.inequality == ((1, 1, 1), 2)
    assert status.witness == (0, 0, 0)  # nothing else bounds the region


def test_witnesses_imply_essential(five_point):
    for status in newton_polyhedron(five_point).statuses:
        if status.witness is not None:
            assert status.essential
            assert not region_contains([status.inequality], status.witness)


@settings(max_examples=150, deadline=None)
@given(st.builds(random_idealistic_cluster, st.integers(1, 12), st.integers(0, 10**6)))
def test_facets_are_rees_valuations(cl):
    flags = rees_flags(cl)
    assert all(D >= 0 for D, _ in flags.values())
    poly = newton_polyhedron(cl, witnesses=False)
    assert not poly.degeneracies and not poly.hard_contradictions
    assert poly.essential_facets == tuple(j for j, (_, rees) in flags.items() if rees)


# -- general elements and rendering ----------------------------------------------------------


def test_general_element_deterministic(five_point):
    assert general_element(five_point, 7) == general_element(five_point, 7)
    terms = general_element(five_point, 7)
    assert [a for a, _ in terms] == list(ideal_generators(five_point).generators)
    assert all(c != 0 and c.denominator == 1 and abs(c) <= 9 for _, c in terms)


def test_quadric_cone_general_element():
    terms = general_element(fixture("single_m2"), 3)
    assert len(terms) == 6 and all(sum(a) == 2 for a, _ in terms)


def test_five_point_element_with_unit_coefficients(five_point):
    printed = [t for t in FIVE_POINT_ELEMENT.replace("-", "+-").split("+") if t]
    signs = {next(iter(parse_monomials(t.lstrip("-")))): (-1 if t.startswith("-") else 1) for t in printed}
    assert set(signs) == set(ideal_generators(five_point).generators)
    order = [next(iter(parse_monomials(t.lstrip("-")))) for t in printed]
    rendered = render_polynomial([(a, Fraction(signs[a])) for a in order])
    assert rendered == "x^6+y^3+z^4+x^3*y+x^2*y^2+y*z^2+y^2*z+x^3*z+x*z^2-x*y*z"


def test_render_helpers():
    assert render_monomial((0, 0, 0)) == "1"
    assert render_monomial((2, 0, 1)) == "x^2*z"
    assert render_polynomial([((1, 0, 0), Fraction(-3)), ((0, 1, 0), Fraction(1))]) == "-3*x+y"
    assert render_polynomial([]) == "0"
