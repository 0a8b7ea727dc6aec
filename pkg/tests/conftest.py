import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from taged.graphs import Digraph, all_digraphs, random_population  # noqa: E402

DATA = Path(__file__).parent / "data"

SEED = 20240611


def three_cycle():
    return Digraph("123", [("1", "2"), ("2", "3"), ("3", "1")])


def two_cycle_plus_isolated():
    return Digraph("123", [("1", "2"), ("2", "1")])


def chain(n=3):
    V = [str(i) for i in range(1, n + 1)]
    return Digraph(V, list(zip(V, V[1:])))


def complete(n, loops=False):
    V = [str(i) for i in range(1, n + 1)]
    return Digraph(V, [(u, v) for u in V for v in V if loops or u != v])


def walk_population():
    """All 512 digraphs on 3 vertices plus 200 seeded random ones on 4 or 5."""
    return all_digraphs(3) + random_population(200, (4, 5), SEED)


def decision_population():
    """All digraphs with at most 3 vertices plus 100 seeded random ones on 4 or 5."""
    small = all_digraphs(1) + all_digraphs(2) + all_digraphs(3)
    return small + random_population(100, (4, 5), SEED + 1)


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import criteria_log

    if criteria_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(criteria_log.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
