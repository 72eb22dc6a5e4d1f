import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from qabench.graph import Graph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def triangle_bridge() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)], 6)


@pytest.fixture
def k4() -> Graph:
    return Graph.from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)], 4)


def two_k4s() -> Graph:
    es = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    es += [(i + 4, j + 4) for i, j in es]
    return Graph.from_edges(es + [(0, 4)], 8)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
