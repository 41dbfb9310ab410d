import json
import random
import warnings
from pathlib import Path

import pytest

from structree import (
    ConsistencyError,
    FormatError,
    InputError,
    MinimizeConfig,
    ParseError,
    build_graph,
    graph_fingerprint,
    minimize,
    parse_edge_list,
    parse_tree,
    parse_tudataset,
    round12,
    serialize_edge_list,
    serialize_tree,
    tree_entropy,
    trivial_tree,
    validate,
)

from conftest import random_graph


def test_parse_triangle():
    res = parse_edge_list("0 1\n1 2\n0 2\n")
    assert res.graph.edges == [(0, 1), (0, 2), (1, 2)]
    assert res.id_map == {0: 0, 1: 1, 2: 2}


def test_parse_comments_commas_and_compaction():
    res = parse_edge_list("# comment\n5,9\n9,5\n")
    assert res.graph.num_vertices == 2
    assert res.graph.edges == [(0, 1)]
    assert res.id_map == {5: 0, 9: 1}
    assert any("duplicate" in w for w in res.warnings)


def test_parse_percent_comments_and_whitespace():
    res = parse_edge_list("% header\n  3   7 \n\n7 12\n")
    assert res.graph.num_vertices == 3
    assert res.id_map == {3: 0, 7: 1, 12: 2}


def test_parse_error_line_number():
    with pytest.raises(ParseError, match="line 2"):
        parse_edge_list("0 1\nx 2\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_edge_list("0 1\n1 2\n0 1 2\n")
    with pytest.raises(ParseError, match="negative"):
        parse_edge_list("0 -1\n")


def test_parse_empty_file():
    with pytest.raises(InputError, match="no edges"):
        parse_edge_list("# nothing\n")


def test_edge_list_round_trip():
    rng = random.Random(4)
    for _ in range(20):
        n = rng.randint(2, 12)
        g = random_graph(n, rng, p=0.6)
        if g.num_edges == 0:
            continue
        again = parse_edge_list(serialize_edge_list(g)).graph
        # identity holds when every vertex appears in some edge
        if sorted({x for e in g.edges for x in e}) == list(range(n)):
            assert again.edges == g.edges
            assert again.num_vertices == g.num_vertices


def test_fingerprint_distinguishes_graphs(bridge, triangle):
    assert graph_fingerprint(bridge) != graph_fingerprint(triangle)
    again = build_graph(6, list(reversed(bridge.edges)))
    assert graph_fingerprint(again) == graph_fingerprint(bridge)


def test_round12():
    assert round12(1.0) == 1.0
    assert round12(2.5566567074628230) == 2.55665670746
    assert round12(0.0) == 0.0


# ---------------------------------------------------------------- tree docs


def test_serialize_k2_document(k2):
    t = trivial_tree(k2)
    doc_text = serialize_tree(t, tree_entropy(k2, t))
    doc = json.loads(doc_text)
    assert doc["format_version"] == "1"
    assert doc["entropy_bits"] == 1.0
    assert len(doc["nodes"]) == 3
    assert doc["height"] == 1
    assert doc["trace_summary"] is None


def test_tree_document_round_trip(bridge):
    tree, trace = minimize(bridge, MinimizeConfig(height_k=2))
    report = tree_entropy(bridge, tree)
    text = serialize_tree(tree, report, trace)
    # byte-identical re-serialization
    parsed = parse_tree(text, bridge)
    again = serialize_tree(parsed, tree_entropy(bridge, parsed), trace)
    assert again == text
    assert validate(parsed, bridge) == []
    assert parsed.canonical_form() == tree.canonical_form()
    doc = json.loads(text)
    assert doc["trace_summary"]["combines"] == 4
    assert doc["trace_summary"]["drops"] == 2


def test_parse_tree_rejects_other_graph(bridge, triangle):
    tree, _ = minimize(bridge, MinimizeConfig(height_k=2))
    text = serialize_tree(tree, tree_entropy(bridge, tree))
    with pytest.raises(ConsistencyError, match="different graph"):
        parse_tree(text, triangle)


def test_parse_tree_rejects_bad_json(bridge):
    with pytest.raises(ParseError):
        parse_tree("{not json", bridge)


def test_serialize_rejects_broken_tree(bridge):
    from structree import EntropyReport

    t = trivial_tree(bridge)
    t.nodes[0].leaf_vertex = None  # leaf detached from its vertex
    with pytest.raises(ConsistencyError):
        serialize_tree(t, EntropyReport(total=0.0))


def test_round_trip_random_corpus():
    rng = random.Random(99)
    for _ in range(15):
        n = rng.randint(2, 10)
        g = random_graph(n, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tree, trace = minimize(g, MinimizeConfig(height_k=rng.randint(2, 3)))
        text = serialize_tree(tree, tree_entropy(g, tree), trace)
        parsed = parse_tree(text, g)
        assert validate(parsed, g) == []
        assert serialize_tree(parsed, tree_entropy(g, parsed), trace) == text


# ---------------------------------------------------------------- tudataset


def write_tu_fixture(root: Path, name: str = "TINY") -> Path:
    """Two graphs: a triangle (label 1) and a single edge (label 2)."""
    d = root / name
    d.mkdir(parents=True, exist_ok=True)
    (d / f"{name}_A.txt").write_text(
        "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n"
    )
    (d / f"{name}_graph_indicator.txt").write_text("1\n1\n1\n2\n2\n")
    (d / f"{name}_graph_labels.txt").write_text("1\n2\n")
    (d / f"{name}_node_labels.txt").write_text("0\n0\n0\n1\n1\n")
    return d


def test_tudataset_fixture(tmp_path):
    d = write_tu_fixture(tmp_path)
    bundle = parse_tudataset(d, "TINY")
    assert len(bundle.graphs) == 2
    assert [g.num_vertices for g in bundle.graphs] == [3, 2]
    assert [g.num_edges for g in bundle.graphs] == [3, 1]
    assert bundle.labels == [1, 2]
    assert "TINY_node_labels.txt" in bundle.extra_files
    assert bundle.warnings == []


def test_tudataset_cross_graph_edge(tmp_path):
    d = write_tu_fixture(tmp_path)
    (d / "TINY_A.txt").write_text("1, 2\n2, 1\n3, 4\n4, 3\n")
    with pytest.raises(FormatError, match="spans graphs"):
        parse_tudataset(d, "TINY")


def test_tudataset_self_loop_warning(tmp_path):
    d = write_tu_fixture(tmp_path)
    (d / "TINY_A.txt").write_text("1, 2\n2, 1\n3, 3\n3, 3\n4, 5\n5, 4\n")
    bundle = parse_tudataset(d, "TINY")
    assert any("self-loop" in w for w in bundle.warnings)


def test_tudataset_missing_file(tmp_path):
    d = write_tu_fixture(tmp_path)
    (d / "TINY_graph_indicator.txt").unlink()
    with pytest.raises(InputError, match="missing required file"):
        parse_tudataset(d, "TINY")


def test_tudataset_label_count_mismatch(tmp_path):
    d = write_tu_fixture(tmp_path)
    (d / "TINY_graph_labels.txt").write_text("1\n")
    with pytest.raises(FormatError, match="labels"):
        parse_tudataset(d, "TINY")
