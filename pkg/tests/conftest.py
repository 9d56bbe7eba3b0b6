import itertools

import pytest

from pdcover.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return Graph.build(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def four_cycle():
    return Graph.build(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def brute_cut_degree(g, J, vertices):
    s = set(vertices)
    return sum(1 for e in J if (g.edges[e].u in s) != (g.edges[e].v in s))


def all_proper_subsets(n):
    """Every nonempty proper subset as a frozenset of vertices."""
    for r in range(1, n):
        for combo in itertools.combinations(range(n), r):
            yield frozenset(combo)


def brute_opt(g, members):
    """Cheapest covering edge subset by scanning all 2^m subsets."""
    best = None
    for x in range(1 << g.m):
        J = [e for e in range(g.m) if x >> e & 1]
        if all(any(g.edges[e].crosses(s) for e in J) for s in members):
            c = sum((g.edges[e].cost for e in J), 0)
            if best is None or c < best:
                best = c
    return best
