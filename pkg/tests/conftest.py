from __future__ import annotations

import pytest

from polylift.graphcore import Digraph, Graph


@pytest.fixture
def k2() -> Graph:
    return Graph.build(range(2), [(0, 1)])


@pytest.fixture
def k3() -> Graph:
    return Graph.build(range(3), [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4() -> Graph:
    return Graph.build(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def path3() -> Graph:
    """Path on 3 nodes: two edges sharing the middle node."""
    return Graph.build(range(3), [(0, 1), (1, 2)])


@pytest.fixture
def oddity_graph() -> Graph:
    """Isolated node 0, triangle {1,2,3}, isolated edge {4,5}.

    The fixture where the stable-set inequality for T = {0} fails to be
    facet-defining: the non-neighbors of 0 induce a bipartite component.
    """
    return Graph.build(range(6), [(1, 2), (1, 3), (2, 3), (4, 5)])


@pytest.fixture
def dag3() -> Digraph:
    """Nodes s=0, a=1, t=2 with arcs s->a, a->t, s->t."""
    return Digraph.build(range(3), [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def chain4() -> Digraph:
    """Single path s=0 -> 1 -> 2 -> t=3."""
    return Digraph.build(range(4), [(0, 1), (1, 2), (2, 3)])
