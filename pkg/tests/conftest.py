import math

import pytest

from rcasim.topology import from_positions

SPACING = 200.0  # 4-neighbour grid: diagonals (283 m) are out of a 250 m range
RANGE = 250.0


def n(k: int) -> int:
    """Node ``n_k`` of the 3x3 figure grid (n1 top-left, row-major) as a node id."""
    return k - 1


def grid3(channels=3, interfaces=3):
    pos = [(c * SPACING, r * SPACING) for r in range(3) for c in range(3)]
    return from_positions(pos, channels=channels, interfaces=interfaces, reception_range=RANGE)


def in_range(topo, a, b) -> bool:
    (x1, y1), (x2, y2) = topo.positions[a], topo.positions[b]
    return math.hypot(x1 - x2, y1 - y2) <= topo.reception_range


def trca_conflict(topo, l1, l2) -> bool:
    """Independent TRCA check: same channel and some endpoint pair within range."""
    (a, b, c1), (c, d, c2) = l1, l2
    return c1 == c2 and any(in_range(topo, u, v) for u in (a, b) for v in (c, d))


@pytest.fixture
def fig_grid():
    return grid3()


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
