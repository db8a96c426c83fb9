"""Named reference clusters used by ``selftest`` and the test suite.

Each entry is cluster-file text (``<id> <parent|-> <label|-> <mult>`` per
line), so the fixtures also exercise the parser.
"""

from __future__ import annotations

import re

from .constellation import Cluster

FIXTURES: dict[str, str] = {
    # smooth germ
    "single_m1": "1 - - 1\n",
    # a general member is a nondegenerate quadric cone
    "single_m2": "1 - - 2\n",
    # two points of multiplicity 3; x^6 + y^3 + z^3 is general
    "chain_3_3": "1 - - 3\n2 1 1 3\n",
    # five points, all five valuations are Rees valuations
    "five_point": "1 - - 3\n2 1 1 2\n3 1 3 1\n4 2 1 1\n5 2 2 1\n",
    # two divisors share the candidate pole -1/4, which cancels
    "shared_candidate": (
        "1 - - 14\n2 1 2 5\n3 2 1 3\n4 3 1 2\n5 3 2 1\n"
        "6 4 3 1\n7 6 2 1\n8 5 3 1\n9 8 3 1\n"
    ),
    # complete ideal with 21 minimal generators
    "ideal_21": "1 - - 5\n2 1 1 3\n3 2 1 1\n4 2 2 2\n5 3 3 1\n6 5 3 1\n7 4 3 1\n8 7 1 1\n",
    # complete ideal with 28 minimal generators
    "ideal_28": "1 - - 6\n2 1 3 3\n3 2 1 2\n4 3 2 1\n5 4 3 1\n",
    # multiplicities follow a Euclidean chain below the root
    "euclidean": (
        "1 - - 19\n2 1 1 5\n3 2 2 5\n4 3 2 5\n5 4 2 4\n"
        "6 5 3 1\n7 6 2 1\n8 7 2 1\n9 8 2 1\n"
    ),
    # the point of multiplicity 17 has two Euclidean branches
    "bi_euclidean": (
        "1 - - 88\n2 1 2 17\n3 2 1 12\n4 3 2 5\n5 4 3 2\n"
        "6 5 2 2\n7 6 2 1\n8 7 3 1\n9 3 3 5\n"
    ),
}

IDEAL_21_GENERATORS = (
    "x^9,y^5,z^5,x^6y,x^5y^2,x^3y^3,x^2y^4,y^4z,y^3z^2,y^2z^3,yz^4,xz^4,"
    "x^2z^3,x^5z^2,x^7z,xyz^3,xy^2z^2,xy^3z,x^3yz^2,x^3y^2z,x^5yz"
)
IDEAL_28_GENERATORS = (
    "x^6,y^6,z^9,x^5y,x^4y^2,x^3y^3,x^2y^4,xy^5,y^5z,y^4z^2,y^3z^3,y^2z^5,yz^7,"
    "x^5z,x^4z^3,x^3z^4,x^2z^6,xz^7,xyz^6,xy^2z^4,xy^3z^2,xy^4z,x^2yz^4,"
    "x^2y^2z^2,x^2y^3z,x^3yz^2,x^3y^2z,x^4yz"
)
FIVE_POINT_GENERATORS = "x^6,y^3,z^4,x^3y,x^2y^2,yz^2,y^2z,x^3z,xz^2,xyz"


def parse_monomials(text: str) -> set[tuple[int, int, int]]:
    """``"x^2y,z"`` -> ``{(2, 1, 0), (0, 0, 1)}``."""
    out = set()
    for token in text.split(","):
        e = [0, 0, 0]
        for var, power in re.findall(r"([xyz])(?:\^(\d+))?", token):
            e["xyz".index(var)] += int(power or 1)
        out.add((e[0], e[1], e[2]))
    return out


def fixture(name: str) -> Cluster:
    from .cli import parse_cluster_file

    return parse_cluster_file(FIXTURES[name])


__all__ = [
    "FIVE_POINT_GENERATORS",
    "FIXTURES",
    "IDEAL_21_GENERATORS",
    "IDEAL_28_GENERATORS",
    "fixture",
    "parse_monomials",
]
