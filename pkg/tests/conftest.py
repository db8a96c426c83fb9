from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from clusterzeta.constellation import Cluster, ProximityData, derive_proximity, random_idealistic_cluster
from clusterzeta.fixtures import fixture
from clusterzeta.strata import StratumTable, strata_table

CORPUS_SIZE = 1000
MAX_POINTS = 12


@dataclass(frozen=True)
class CorpusItem:
    seed: int
    cluster: Cluster
    px: ProximityData
    table: StratumTable


def corpus_cluster(seed: int) -> Cluster:
    return random_idealistic_cluster(1 + seed % MAX_POINTS, seed)


@pytest.fixture(scope="session")
def corpus() -> list[CorpusItem]:
    items = []
    for seed in range(CORPUS_SIZE):
        cl = corpus_cluster(seed)
        px = derive_proximity(cl.constellation)
        items.append(CorpusItem(seed, cl, px, strata_table(cl, px)))
    return items


@pytest.fixture
def five_point() -> Cluster:
    return fixture("five_point")


@pytest.fixture
def shared_candidate() -> Cluster:
    return fixture("shared_candidate")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
