import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structree import InputError, build_graph, cut_between, set_stats

from conftest import random_graph


def test_triangle_construction(triangle):
    assert triangle.num_vertices == 3
    assert triangle.total_volume == 6
    assert triangle.edges == [(0, 1), (0, 2), (1, 2)]
    assert list(triangle.degree) == [2, 2, 2]


def test_normalization_drops_loops_and_duplicates():
    g = build_graph(2, [(0, 1), (1, 0), (0, 0)])
    assert g.edges == [(0, 1)]
    assert g.self_loops_dropped == 1
    assert g.duplicate_edges_collapsed == 1


def test_bridge_degrees(bridge):
    assert bridge.total_volume == 14
    assert list(bridge.degree) == [2, 2, 3, 3, 2, 2]


def test_out_of_range_vertex_rejected():
    with pytest.raises(InputError, match="edge 1"):
        build_graph(3, [(0, 1), (1, 3)])


def test_adjacency_is_symmetric_and_sorted(bridge):
    adj = bridge.adjacency
    for v in range(bridge.num_vertices):
        assert list(adj[v]) == sorted(adj[v])
        for u in adj[v]:
            assert v in adj[u]
        assert bridge.degree[v] == len(adj[v])


def test_set_stats_bridge_module(bridge):
    stats = set_stats(bridge, {0, 1, 2})
    assert stats.volume == 7
    assert stats.cut == 1


def test_set_stats_full_set_and_singleton(bridge, triangle):
    full = set_stats(bridge, range(6))
    assert full.volume == bridge.total_volume
    assert full.cut == 0
    single = set_stats(triangle, {0})
    assert single.volume == 2
    assert single.cut == 2


def test_set_stats_rejects_unknown_vertex(triangle):
    with pytest.raises(InputError):
        set_stats(triangle, {0, 7})


def test_cut_between_examples(bridge, triangle):
    assert cut_between(bridge, {0, 1, 2}, {3, 4, 5}) == 1
    assert cut_between(triangle, {0}, {1}) == 1
    assert cut_between(triangle, {0}, set()) == 0


def test_cut_between_rejects_overlap(triangle):
    with pytest.raises(InputError, match="overlap"):
        cut_between(triangle, {0, 1}, {1, 2})


@given(st.integers(min_value=1, max_value=500))
@settings(max_examples=40, deadline=None)
def test_bipartition_cuts_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    g = random_graph(n, rng)
    side = [v for v in range(n) if rng.random() < 0.5]
    rest = [v for v in range(n) if v not in side]
    assert set_stats(g, side).cut == set_stats(g, rest).cut


@given(st.integers(min_value=1, max_value=500))
@settings(max_examples=40, deadline=None)
def test_union_cut_identity(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    g = random_graph(n, rng)
    verts = list(range(n))
    rng.shuffle(verts)
    split = rng.randint(0, n)
    a, rest = verts[:split], verts[split:]
    b = rest[: rng.randint(0, len(rest))]
    lhs = set_stats(g, set(a) | set(b)).cut
    rhs = set_stats(g, a).cut + set_stats(g, b).cut - 2 * cut_between(g, a, b)
    assert lhs == rhs


@given(st.integers(min_value=1, max_value=500))
@settings(max_examples=40, deadline=None)
def test_relabeling_invariance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    g = random_graph(n, rng)
    perm = list(range(n))
    rng.shuffle(perm)
    h = build_graph(n, [(perm[u], perm[v]) for u, v in g.edges])
    assert h.total_volume == g.total_volume
    members = [v for v in range(n) if rng.random() < 0.5]
    assert set_stats(g, members) == set_stats(h, [perm[v] for v in members])


def test_empty_member_set(triangle):
    stats = set_stats(triangle, [])
    assert (stats.volume, stats.cut) == (0, 0)


def test_large_vectorized_build():
    rng = np.random.default_rng(0)
    edges = rng.integers(0, 200, size=(2000, 2))
    g = build_graph(200, edges)
    assert g.total_volume == 2 * g.num_edges
    # degree equals adjacency length everywhere
    assert all(g.degree[v] == len(g.neighbors(v)) for v in range(200))
