"""Built-in checks run by ``clusterzeta selftest``: reference clusters plus a random corpus."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable

from .constellation import (
    derive_proximity,
    numerical_data,
    random_idealistic_cluster,
    recognize_bi_euclidean,
    recognize_euclidean,
    validate_idealistic,
)
from .fixtures import (
    FIVE_POINT_GENERATORS,
    IDEAL_21_GENERATORS,
    IDEAL_28_GENERATORS,
    fixture,
    parse_monomials,
)
from .monodromy import acampo, full_check
from .monomial import ideal_generators, newton_polyhedron
from .ratzeta import poles, z_top
from .strata import classify_sign, drt, strata_table


def _five_point() -> bool:
    cl = fixture("five_point")
    px = derive_proximity(cl.constellation)
    nd = numerical_data(cl, px)
    return (
        [px.w(j) for j in cl.points] == [(1, 1, 1), (1, 2, 2), (2, 2, 1), (1, 3, 3), (2, 3, 4)]
        and nd.N[1:] == (3, 5, 4, 6, 9)
        and set(ideal_generators(cl).generators) == parse_monomials(FIVE_POINT_GENERATORS)
        and Fraction(-5, 4) not in poles(z_top(cl)).values()
    )


def _ideals() -> bool:
    return set(ideal_generators(fixture("ideal_21")).generators) == parse_monomials(
        IDEAL_21_GENERATORS
    ) and set(ideal_generators(fixture("ideal_28")).generators) == parse_monomials(
        IDEAL_28_GENERATORS
    )


def _small_germs() -> bool:
    m1, m2, c33 = fixture("single_m1"), fixture("single_m2"), fixture("chain_3_3")
    return (
        z_top(m1).render() == "1/(s+1)"
        and acampo(m1).milnor_number == 0
        and z_top(m2).render() == "(s+3)/((2s+3)(s+1))"
        and acampo(m2).milnor_number == 1
        and acampo(c33).milnor_number == 20
    )


def _shared_candidate() -> bool:
    cl = fixture("shared_candidate")
    table = strata_table(cl)
    nd = table.numerical
    k = next(j for j in cl.points if nd.N[j] == 192)
    found = poles(z_top(cl, table)).values()
    return (
        table.single(k) == 1
        and Fraction(-15, 56) not in found
        and Fraction(-29, 112) not in found
        and full_check(cl).verdict
    )


def _recognizers() -> bool:
    e, b = fixture("euclidean"), fixture("bi_euclidean")
    return recognize_euclidean(e, None, 1) and recognize_bi_euclidean(b, None, 2)


def _corpus(size: int) -> Callable[[], bool]:
    def check() -> bool:
        for seed in range(size):
            cl = random_idealistic_cluster(1 + seed % 8, seed)
            if not validate_idealistic(cl).idealistic:
                return False
            px = derive_proximity(cl.constellation)
            table = strata_table(cl, px)
            for i in cl.points:
                total = sum(table.containing(i).values())
                if total != 3 + len(px.proximate_to(i)):
                    return False
                if drt(cl, px, i).chi != table.single(i):
                    return False
                if not classify_sign(cl, px, i).consistent:
                    return False
            if not full_check(cl).verdict:
                return False
            if newton_polyhedron(cl, witnesses=False).degeneracies:
                return False
            if newton_polyhedron(cl, witnesses=False).hard_contradictions:
                return False
        return True

    return check


def run_selftest(out, *, as_json: bool = False, corpus: int = 60) -> int:
    checks: list[tuple[str, Callable[[], bool]]] = [
        ("five-point example: valuations, N, generators, cancelled pole", _five_point),
        ("ideals with 21 and 28 generators", _ideals),
        ("smooth germ, quadric cone, chain (3,3)", _small_germs),
        ("shared candidate pole cluster", _shared_candidate),
        ("Euclidean and bi-Euclidean recognizers", _recognizers),
        (f"random corpus of {corpus} clusters", _corpus(corpus)),
    ]
    results = []
    for name, check in checks:
        try:
            ok = bool(check())
        except Exception as exc:  # a crash is a failed check, reported as such
            ok = False
            name = f"{name} (raised {type(exc).__name__}: {exc})"
        results.append({"check": name, "ok": ok})
        if not as_json:
            out.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
    if as_json:
        out.write(json.dumps({"selftest": results, "ok": all(r["ok"] for r in results)}, indent=2) + "\n")
    return 0 if all(r["ok"] for r in results) else 1
