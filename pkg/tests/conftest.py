from __future__ import annotations

import random

import pytest

from graphcall.graphs import Graph


def random_graph(
    rng: random.Random,
    n: int,
    m: int | None = None,
    directed: bool = False,
    weighted: bool = False,
    max_weight: int = 5,
) -> Graph:
    """Random simple graph on nodes 0..n-1 with ~m edges."""
    g = Graph(directed=directed, weighted=weighted)
    g.add_nodes(list(range(n)))
    if n < 2:
        return g
    if m is None:
        m = max(1, int(1.4 * n))
    if directed:
        universe = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        universe = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = min(m, len(universe))
    for u, v in rng.sample(universe, m):
        g.add_edges([(u, v)], [rng.randint(1, max_weight)] if weighted else None)
    return g


@pytest.fixture
def rescue_graph() -> Graph:
    """The decision-support session's weighted terrain graph (nodes 0..9)."""
    g = Graph(directed=False, weighted=True)
    g.add_nodes(list(range(10)))
    g.add_edges(
        [[8, 3], [3, 5], [5, 2], [2, 9], [2, 1], [1, 6], [6, 4], [4, 7], [5, 9]],
        [15, 3, 6, 12, 12, 5, 9, 4, 9],
    )
    return g


@pytest.fixture
def disconnected_graph() -> Graph:
    """Seven nodes 1..7 with edges (1,3), (2,3), (4,5)."""
    g = Graph()
    g.add_nodes([1, 2, 3, 4, 5, 6, 7])
    g.add_edges([[1, 3], [2, 3], [4, 5]])
    return g
