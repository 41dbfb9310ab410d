"""Shared fixtures: the named example graphs and an independent entropy oracle."""

import math
import random

import pytest

from structree import CodingTree, Graph, build_graph, validate


@pytest.fixture
def triangle() -> Graph:
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k2() -> Graph:
    return build_graph(2, [(0, 1)])


@pytest.fixture
def k4() -> Graph:
    return build_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def star4() -> Graph:
    """Star with center 0 of degree 3."""
    return build_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def path4() -> Graph:
    return build_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def bridge() -> Graph:
    """Two triangles {0,1,2} and {3,4,5} joined by the edge (2,3)."""
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def two_triangles() -> Graph:
    """Disconnected pair of triangles."""
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def reference_entropy(g: Graph, t: CodingTree) -> float:
    """Independent evaluation of the entropy sum, sharing no library code.

    Degrees come straight from the edge list, markers from a plain walk,
    and cuts from edge scans, so this cross-checks every cache the
    library maintains.
    """
    edges = [(int(u), int(v)) for u, v in g.edge_array]
    deg = [0] * g.num_vertices
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    vol_total = sum(deg)
    if vol_total == 0:
        return 0.0

    def marker(nid):
        nd = t.nodes[nid]
        if nd.leaf_vertex is not None:
            return {nd.leaf_vertex}
        out = set()
        for c in nd.children:
            out |= marker(c)
        return out

    total = 0.0
    for nid, nd in t.nodes.items():
        if nid == t.root:
            continue
        members = marker(nid)
        vol = sum(deg[v] for v in members)
        cut = sum(1 for u, v in edges if (u in members) != (v in members))
        pvol = sum(deg[v] for v in marker(nd.parent))
        if cut == 0 or vol == 0 or vol == pvol:
            continue
        total += -(cut / vol_total) * math.log2(vol / pvol)
    return total


def random_graph(n: int, rng: random.Random, p: float | None = None) -> Graph:
    """Seeded labeled random graph for property tests."""
    if p is None:
        p = rng.uniform(0.15, 0.8)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


def assert_valid(t: CodingTree, g: Graph) -> None:
    issues = validate(t, g)
    assert issues == [], issues
