import math
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structree import (
    ConsistencyError,
    InputError,
    build_graph,
    combine,
    drop,
    insert_unary,
    one_dim_entropy,
    recompute_entropy,
    tree_entropy,
    trivial_tree,
    validate,
)

from conftest import assert_valid, random_graph, reference_entropy

BRIDGE_OPT_ENTROPY = 1.6995138503199656  # hand-evaluated module + leaf terms


def test_trivial_tree_shapes(triangle, bridge):
    t = trivial_tree(triangle)
    assert len(t.nodes) == 4
    assert t.height == 1
    assert sorted(t.nodes[t.root].children) == [0, 1, 2]
    t6 = trivial_tree(bridge)
    assert len(t6.nodes[t6.root].children) == 6
    assert_valid(t6, bridge)


def test_trivial_tree_single_vertex():
    g = build_graph(1, [])
    t = trivial_tree(g)
    assert t.height == 1
    assert len(t.nodes) == 2


def test_trivial_tree_rejects_empty_graph():
    with pytest.raises(InputError):
        trivial_tree(build_graph(0, []))


def test_k2_trivial_entropy(k2):
    assert tree_entropy(k2, trivial_tree(k2)).total == pytest.approx(1.0, abs=1e-12)


def test_triangle_trivial_entropy(triangle):
    expected = math.log2(3)
    assert tree_entropy(triangle, trivial_tree(triangle)).total == pytest.approx(
        expected, abs=1e-12
    )


def test_bridge_height2_entropy(bridge):
    t = trivial_tree(bridge)
    a, _ = combine(t, 0, 1)
    a2, _ = combine(t, a, 2)
    b, _ = combine(t, 3, 4)
    b2, _ = combine(t, b, 5)
    drop(t, a)
    drop(t, b)
    report = tree_entropy(bridge, t)
    assert report.total == pytest.approx(BRIDGE_OPT_ENTROPY, abs=1e-9)
    assert report.total == pytest.approx(reference_entropy(bridge, t), abs=1e-12)
    assert t.height == 2
    assert_valid(t, bridge)


def test_entropy_report_consistency(bridge):
    t = trivial_tree(bridge)
    report = tree_entropy(bridge, t)
    assert report.total == pytest.approx(sum(report.per_node.values()), abs=1e-12)
    assert all(v >= 0 for v in report.per_node.values())
    assert report.log_base == 2


def test_one_dim_entropy_values(k4, bridge, star4):
    assert one_dim_entropy(k4) == pytest.approx(2.0, abs=1e-12)
    assert one_dim_entropy(bridge) == pytest.approx(2.556656707462823, abs=1e-9)
    # -(3/6)log2(3/6) - 3*(1/6)log2(1/6)
    assert one_dim_entropy(star4) == pytest.approx(1.792481250360578, abs=1e-9)


def test_isolated_vertex_contributes_zero():
    g = build_graph(3, [(0, 1)])
    report = tree_entropy(g, trivial_tree(g))
    assert report.per_node[2] == 0.0  # degree-0 leaf: 0*log(0) convention
    assert report.total == pytest.approx(1.0, abs=1e-12)
    assert one_dim_entropy(g) == pytest.approx(1.0, abs=1e-12)


def test_one_dim_matches_trivial_tree(bridge):
    assert one_dim_entropy(bridge) == pytest.approx(
        tree_entropy(bridge, trivial_tree(bridge)).total, abs=1e-12
    )


def test_zero_volume_graph_warns_and_returns_zero():
    g = build_graph(3, [])
    t = trivial_tree(g)
    with pytest.warns(UserWarning, match="no edges"):
        report = tree_entropy(g, t)
    assert report.total == 0.0
    with pytest.warns(UserWarning):
        assert one_dim_entropy(g) == 0.0


def test_tree_graph_mismatch_raises(bridge, triangle):
    t = trivial_tree(bridge)
    with pytest.raises(ConsistencyError):
        tree_entropy(triangle, t)


def test_combine_bridge_leaves_0_1(bridge):
    t = trivial_tree(bridge)
    before = tree_entropy(bridge, t).total
    new_id, delta = combine(t, 0, 1)
    expected = (2 * 1 / 14) * math.log2(4 / 14)
    assert delta == pytest.approx(expected, abs=1e-12)
    assert delta == pytest.approx(-0.258194, abs=1e-6)
    after = tree_entropy(bridge, t).total
    assert after - before == pytest.approx(delta, abs=1e-9)
    node = t.nodes[new_id]
    assert node.children == [0, 1]
    assert node.volume == 4 and node.cut == 2
    assert_valid(t, bridge)


def test_combine_bridge_leaves_2_3(bridge):
    t = trivial_tree(bridge)
    _, delta = combine(t, 2, 3)
    assert delta == pytest.approx((2 / 14) * math.log2(6 / 14), abs=1e-12)
    assert delta == pytest.approx(-0.174627, abs=1e-6)


def test_combine_zero_cut_pair(two_triangles):
    t = trivial_tree(two_triangles)
    _, delta = combine(t, 0, 3)
    assert delta == 0.0


def test_combine_preconditions(bridge):
    t = trivial_tree(bridge)
    with pytest.raises(InputError):
        combine(t, 0, 0)
    new_id, _ = combine(t, 0, 1)
    with pytest.raises(InputError, match="not a child of the root"):
        combine(t, 0, 2)  # 0 is no longer a root child
    assert new_id in t.nodes


def test_drop_module_node(bridge):
    t = trivial_tree(bridge)
    a, _ = combine(t, 0, 1)      # {0,1}
    a2, _ = combine(t, a, 2)     # {0,1,2} with volume 7
    before = tree_entropy(bridge, t).total
    delta = drop(t, a)
    expected = (2 * 1 / 14) * math.log2(7 / 4)
    assert delta == pytest.approx(expected, abs=1e-12)
    after = tree_entropy(bridge, t).total
    assert after - before == pytest.approx(delta, abs=1e-9)
    assert sorted(t.nodes[a2].children) == [0, 1, 2]
    assert_valid(t, bridge)


def test_drop_edge_free_children(two_triangles):
    t = trivial_tree(two_triangles)
    nid, _ = combine(t, 0, 3)  # no edges between the two components
    assert drop(t, nid) == 0.0


def test_drop_preconditions(bridge):
    t = trivial_tree(bridge)
    with pytest.raises(InputError, match="root"):
        drop(t, t.root)
    with pytest.raises(InputError, match="leaf"):
        drop(t, 0)


def test_combine_then_drop_restores(bridge):
    t = trivial_tree(bridge)
    before = recompute_entropy(bridge, t)
    canon = t.canonical_form()
    nid, d1 = combine(t, 2, 5)
    d2 = drop(t, nid)
    assert recompute_entropy(bridge, t) == before  # exact: same structure
    assert d1 + d2 == pytest.approx(0.0, abs=1e-12)
    assert t.canonical_form() == canon


def test_unary_insertion_is_entropy_neutral(bridge):
    t = trivial_tree(bridge)
    combine(t, 0, 1)
    before = tree_entropy(bridge, t).total
    insert_unary(t, 2)
    insert_unary(t, 0)  # deeper in the tree
    assert tree_entropy(bridge, t).total == pytest.approx(before, abs=1e-12)
    assert_valid(t, bridge)


def test_validate_detects_detached_leaf(bridge):
    t = trivial_tree(bridge)
    t.nodes[0].leaf_vertex = None
    issues = validate(t, bridge)
    assert any("axiom-4" in s for s in issues)


def test_validate_detects_stale_volume(bridge):
    t = trivial_tree(bridge)
    combine(t, 0, 1)
    t.refresh_levels()
    node_id = t.nodes[t.root].children[-1]
    t.nodes[node_id].volume += 1
    issues = validate(t, bridge)
    assert any(s.startswith("cache:") and f"node {node_id} volume" in s for s in issues)


def test_validate_detects_stale_level(bridge):
    t = trivial_tree(bridge)
    t.nodes[2].level = 5
    issues = validate(t, bridge)
    assert any("level" in s and "node 2" in s for s in issues)


def test_validate_detects_duplicate_vertex(bridge):
    t = trivial_tree(bridge)
    t.nodes[1].leaf_vertex = 0
    issues = validate(t, bridge)
    assert any("axiom-4" in s for s in issues)


@given(st.integers(min_value=1, max_value=10_000))
@settings(max_examples=60, deadline=None)
def test_random_mutations_match_recomputation(seed):
    """Every incremental delta agrees with a from-scratch evaluation."""
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    g = random_graph(n, rng)
    t = trivial_tree(g)
    entropy = recompute_entropy(g, t)
    for _ in range(rng.randint(1, 12)):
        root_children = t.nodes[t.root].children
        inner = [nid for nid, nd in t.nodes.items()
                 if nid != t.root and not nd.is_leaf]
        do_combine = len(root_children) > 2 and (not inner or rng.random() < 0.6)
        if do_combine:
            a, b = rng.sample(root_children, 2)
            _, delta = combine(t, a, b)
            assert delta <= 1e-12
        elif inner:
            delta = drop(t, rng.choice(inner))
            assert delta >= -1e-12
        else:
            break
        entropy += delta
        fresh = recompute_entropy(g, t)
        assert fresh == pytest.approx(entropy, abs=1e-9)
        assert fresh == pytest.approx(reference_entropy(g, t), abs=1e-9)
        entropy = fresh
        assert_valid(t, g)


@given(st.integers(min_value=1, max_value=10_000))
@settings(max_examples=30, deadline=None)
def test_entropy_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    g = random_graph(n, rng)
    perm = list(range(n))
    rng.shuffle(perm)
    h = build_graph(n, [(perm[u], perm[v]) for u, v in g.edges])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert one_dim_entropy(g) == pytest.approx(one_dim_entropy(h), abs=1e-12)
