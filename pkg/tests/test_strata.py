from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterzeta.constellation import (
    LABEL_PAIRS,
    LABELS,
    M,
    Cluster,
    build_constellation,
    derive_proximity,
    make_cluster,
    random_idealistic_cluster,
)
from clusterzeta.errors import NotProximate
from clusterzeta.fixtures import fixture
from clusterzeta.strata import (
    Sign,
    candidate_keys,
    chi_pair_exc,
    chi_strict_triple,
    classify_sign,
    drt,
    lemma_finite_predicate,
    match_patterns,
    strata_table,
)

random_clusters = st.builds(
    random_idealistic_cluster, st.integers(1, 12), st.integers(0, 10**6)
)


def all_idealistic_clusters(max_points: int, max_slack: int):
    """Every labelled constellation with up to ``max_points`` points, with every
    idealistic multiplicity assignment whose slack over the proximity bound is at
    most ``max_slack``."""
    for r in range(1, max_points + 1):
        for shape in _trees(r):
            c = build_constellation(shape)
            for slacks in itertools.product(range(max_slack + 1), repeat=r):
                mults = [0] * r
                ok = True
                for i in range(r, 0, -1):
                    base = 0
                    for a, b in LABEL_PAIRS:
                        part = Cluster(c, tuple(max(m, 0) for m in mults))
                        base = max(base, M(part, None, i, a, b) + M(part, None, i, b, a))
                    mults[i - 1] = base + slacks[i - 1]
                    if mults[i - 1] == 0:
                        ok = False
                        break
                if ok:
                    yield Cluster(c, tuple(mults))


def _trees(r: int):
    def grow(edges, used):
        j = len(edges) + 2
        if j > r:
            yield list(edges)
            return
        for p in range(1, j):
            for a in LABELS:
                if (p, a) not in used:
                    yield from grow(edges + [(j, p, a)], used | {(p, a)})

    yield from grow([], frozenset())


# -- reference tables -----------------------------------------------------------------


def test_chain_3_3_table():
    table = strata_table(fixture("chain_3_3"))
    assert dict(table.entries) == {
        (1,): -1,
        (2,): 4,
        (0, 1): 3,
        (0, 2): -3,
        (1, 2): -1,
        (0, 1, 2): 3,
    }


def test_single_point_tables():
    assert dict(strata_table(fixture("single_m2")).entries) == {(1,): 1, (0, 1): 2}
    assert dict(strata_table(fixture("single_m1")).entries) == {(1,): 1, (0, 1): 2}


def test_five_point_values(five_point):
    table = strata_table(five_point)
    assert [table.single(i) for i in five_point.points] == [2, 1, 0, 0, 0]
    assert table.chi(1, 2) == 0 and table.chi(1, 3) == 1
    assert table.chi(0, 1) == -1 and table.chi(0, 3) == 1
    assert table.chi(0, 1, 5) == 1
    # Q_5 is proximate to Q_1 and Q_2: one triple point of E_1, E_2, E_5
    assert table.chi(1, 2, 5) == 1


def test_nine_point_singles_and_patterns(shared_candidate):
    table = strata_table(shared_candidate)
    assert [table.single(i) for i in shared_candidate.points] == [132, 8, 0, 0, -1, 0, 1, 0, 1]
    patterns = [match_patterns(shared_candidate, None, i) for i in shared_candidate.points]
    assert patterns == [(), (), ("C8B",), ("C9B",), ("C3",), ("C7",), (), ("C7",), ()]


def test_nine_point_top_divisor(shared_candidate):
    table = strata_table(shared_candidate)
    nd = table.numerical
    k = nd.N.index(192)
    assert table.single(k) == 1
    # E_k meets the divisors with N = 36, 52, 103 in one triple point that is blown up
    i, j, l = sorted(j for j in shared_candidate.points if nd.N[j] in (36, 52, 103))
    assert table.chi(i, j, l) == 0


def test_ideal_28_multiplicity_two_point_is_c9():
    cl = fixture("ideal_28")
    i = next(j for j in cl.points if cl.m(j) == 2)
    c = classify_sign(cl, None, i)
    assert c.sign is Sign.ZERO
    assert any(p.startswith("C9") for p in c.matched_patterns)


def test_drt_values(five_point):
    assert (lambda d: (d.D, d.R, d.T))(drt(five_point, None, 1)) == (3, 2, 1)
    assert (lambda d: (d.D, d.R, d.T))(drt(five_point, None, 2)) == (2, 1, 0)
    d = drt(fixture("chain_3_3"), None, 1)
    assert (d.D, d.R, d.T, d.chi) == (0, 3, 2, -1)


def test_chain_negative_point_matches_c1():
    c = classify_sign(fixture("chain_3_3"), None, 1)
    assert c.sign is Sign.NEGATIVE and c.matched_patterns == ("C1",)
    assert c.consistent


def test_non_proximate_pair_raises(five_point):
    with pytest.raises(NotProximate):
        chi_pair_exc(five_point, None, 3, 4)
    with pytest.raises(NotProximate):
        chi_strict_triple(five_point, None, 4, 1)


def test_candidate_keys_shapes(five_point):
    keys = candidate_keys(five_point, derive_proximity(five_point.constellation))
    assert (0,) not in keys and () not in keys
    assert all(1 <= len(k) <= 3 for k in keys)


def test_lemma_finite_holds_for_long_rays():
    # every child of the root has children in both other directions, so each
    # pair of rays Q_1(a, b^t), Q_1(b, a^t) carries four points
    edges = [(2, 1, 1), (3, 1, 2), (4, 1, 3)]
    edges += [(5, 2, 2), (6, 2, 3), (7, 3, 1), (8, 3, 3), (9, 4, 1), (10, 4, 2)]
    cl = make_cluster(edges, (6, 2, 2, 2, 1, 1, 1, 1, 1, 1))
    assert lemma_finite_predicate(cl, None, 1)
    assert classify_sign(cl, None, 1).chi > 0
    assert not lemma_finite_predicate(fixture("five_point"), None, 1)


# -- invariants on random clusters --------------------------------------------------


def _check_invariants(cl: Cluster) -> None:
    px = derive_proximity(cl.constellation)
    table = strata_table(cl, px)
    for i in cl.points:
        assert sum(table.containing(i).values()) == 3 + len(px.proximate_to(i))
        assert drt(cl, px, i).chi == table.single(i)
        assert classify_sign(cl, px, i).consistent
        if lemma_finite_predicate(cl, px, i):
            assert table.single(i) > 0


@settings(max_examples=200, deadline=None)
@given(random_clusters)
def test_invariants_on_random_clusters(cl):
    _check_invariants(cl)


def test_invariants_exhaustive_small():
    count = 0
    for cl in all_idealistic_clusters(4, 2):
        _check_invariants(cl)
        count += 1
    assert count > 1000
