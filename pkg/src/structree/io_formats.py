"""Parsers and serializers: edge lists, TUDataset directories, tree JSON.

All serialization is canonical (sorted keys, nodes sorted by id, reals at
12 significant digits) so identical inputs produce byte-identical output
on any platform; golden-file tests rely on that.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConsistencyError, FormatError, InputError, ParseError
from .graph import Graph, build_graph
from .minimize import MinimizeTrace
from .tree import CodingTree, CodingTreeNode, EntropyReport

FORMAT_VERSION = "1"


@dataclass
class EdgeListResult:
    graph: Graph
    id_map: dict[int, int]  # original id -> dense 0-based id
    warnings: list[str] = field(default_factory=list)


@dataclass
class DatasetBundle:
    graphs: list[Graph]
    labels: list[int] | None
    name: str
    warnings: list[str] = field(default_factory=list)
    extra_files: dict[str, list[str]] = field(default_factory=dict)


def parse_edge_list(text: str) -> EdgeListResult:
    """Parse "u v" lines (whitespace or comma separated) into a Graph.

    Lines starting with '#' or '%' are comments. Arbitrary non-negative
    integer ids are compacted to dense 0-based ids; the mapping is
    returned alongside the graph.
    """
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) != 2:
            raise ParseError(f"expected two vertex ids, got {raw!r}", line=lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {raw!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {raw!r}", line=lineno)
        pairs.append((u, v))
    if not pairs:
        raise InputError("edge list contains no edges")

    ids = sorted({x for p in pairs for x in p})
    id_map = {orig: dense for dense, orig in enumerate(ids)}
    g = build_graph(len(ids), [(id_map[u], id_map[v]) for u, v in pairs])
    warnings = []
    if g.self_loops_dropped:
        warnings.append(f"dropped {g.self_loops_dropped} self-loop(s)")
    if g.duplicate_edges_collapsed:
        warnings.append(f"collapsed {g.duplicate_edges_collapsed} duplicate edge(s)")
    return EdgeListResult(graph=g, id_map=id_map, warnings=warnings)


def serialize_edge_list(g: Graph) -> str:
    """Canonical "u v" lines; inverse of parse_edge_list on normalized graphs.

    Isolated vertices are not representable in this format.
    """
    return "".join(f"{u} {v}\n" for u, v in g.edge_array.tolist())


def graph_fingerprint(g: Graph) -> str:
    """sha256 of the canonical edge list plus the vertex count."""
    payload = f"n={g.num_vertices}\n" + serialize_edge_list(g)
    return hashlib.sha256(payload.encode()).hexdigest()


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise InputError(f"missing required file: {path}")
    return path.read_text().splitlines()


def parse_tudataset(directory: str | Path, name: str) -> DatasetBundle:
    """Parse the standard multi-graph benchmark layout.

    Reads NAME_A.txt (1-based edge pairs), NAME_graph_indicator.txt, and
    optionally NAME_graph_labels.txt. Node/edge label and attribute files
    are retained as opaque metadata. Edge pairs are listed in both
    directions on disk; they collapse to one undirected edge per pair.
    """
    directory = Path(directory)
    indicator_lines = _read_lines(directory / f"{name}_graph_indicator.txt")
    a_lines = _read_lines(directory / f"{name}_A.txt")

    indicator: list[int] = []
    for lineno, line in enumerate(indicator_lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            indicator.append(int(line))
        except ValueError:
            raise ParseError(f"bad graph id {line!r} in graph indicator", line=lineno) from None
    if not indicator:
        raise InputError(f"{name}_graph_indicator.txt is empty")

    graph_ids = sorted(set(indicator))
    # global 1-based node id -> (graph index, local 0-based id)
    gid_index = {gid: i for i, gid in enumerate(graph_ids)}
    local_id: dict[int, tuple[int, int]] = {}
    counters = [0] * len(graph_ids)
    for node, gid in enumerate(indicator, start=1):
        gi = gid_index[gid]
        local_id[node] = (gi, counters[gi])
        counters[gi] += 1

    edges: list[list[tuple[int, int]]] = [[] for _ in graph_ids]
    loops = [0] * len(graph_ids)
    seen: list[set[tuple[int, int]]] = [set() for _ in graph_ids]
    for lineno, line in enumerate(a_lines, start=1):
        line = line.strip()
        if not line:
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'u, v', got {line!r}", line=lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", line=lineno) from None
        if u not in local_id or v not in local_id:
            raise FormatError(f"edge ({u}, {v}) references an unknown node")
        gu, lu = local_id[u]
        gv, lv = local_id[v]
        if gu != gv:
            raise FormatError(
                f"edge ({u}, {v}) spans graphs {graph_ids[gu]} and {graph_ids[gv]}"
            )
        if lu == lv:
            loops[gu] += 1
            continue
        pair = (min(lu, lv), max(lu, lv))
        if pair not in seen[gu]:
            seen[gu].add(pair)
            edges[gu].append(pair)

    warnings = []
    graphs = []
    for gi, gid in enumerate(graph_ids):
        g = build_graph(counters[gi], sorted(edges[gi]))
        graphs.append(g)
        if loops[gi]:
            # both directions of a self-loop appear on disk; count pairs
            warnings.append(f"graph {gid}: dropped {(loops[gi] + 1) // 2} self-loop(s)")

    labels = None
    label_path = directory / f"{name}_graph_labels.txt"
    if label_path.is_file():
        labels = [int(x) for x in label_path.read_text().split()]
        if len(labels) != len(graphs):
            raise FormatError(
                f"{len(labels)} graph labels for {len(graphs)} graphs"
            )

    extra_files = {}
    for suffix in ("node_labels", "edge_labels", "node_attributes",
                   "edge_attributes", "graph_attributes"):
        p = directory / f"{name}_{suffix}.txt"
        if p.is_file():
            extra_files[p.name] = p.read_text().splitlines()

    return DatasetBundle(graphs=graphs, labels=labels, name=name,
                         warnings=warnings, extra_files=extra_files)


def round12(x: float) -> float:
    """Round to 12 significant digits (the canonical real rendering)."""
    return float(f"{float(x):.12g}")


def _round_reals(obj):
    if isinstance(obj, float):
        return round12(obj)
    if isinstance(obj, dict):
        return {k: _round_reals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_reals(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, 12-digit reals."""
    return json.dumps(_round_reals(obj), sort_keys=True, separators=(",", ":"))


def _light_tree_check(t: CodingTree) -> None:
    leaves = sorted(
        nd.leaf_vertex for nd in t.nodes.values()
        if nd.is_leaf and nd.leaf_vertex is not None
    )
    if leaves != list(range(t.graph.num_vertices)):
        raise ConsistencyError("tree leaves do not biject with graph vertices")
    for nid, nd in t.nodes.items():
        for c in nd._children:
            if c not in t.nodes or t.nodes[c].parent != nid:
                raise ConsistencyError(f"broken parent/child link at node {nid}")


def serialize_tree(
    t: CodingTree,
    report: EntropyReport,
    trace: MinimizeTrace | None = None,
) -> str:
    """Canonical TreeDocument JSON (byte-identical for identical inputs)."""
    _light_tree_check(t)
    t.refresh_levels()
    nodes = []
    for nid in sorted(t.nodes):
        nd = t.nodes[nid]
        nodes.append({
            "id": nid,
            "parent": nd.parent,
            "children": nd.children,
            "leaf_vertex": nd.leaf_vertex,
            "volume": nd.volume,
            "cut": nd.cut,
            "level": nd.level,
        })
    doc = {
        "format_version": FORMAT_VERSION,
        "graph_fingerprint": graph_fingerprint(t.graph),
        "height": t.nodes[t.root].subtree_h,
        "entropy_bits": report.total,
        "nodes": nodes,
        "trace_summary": None if trace is None else {
            "combines": trace.combines,
            "drops": trace.drops,
            "pads": trace.pads,
            "initial_entropy": trace.initial_entropy,
        },
    }
    return canonical_json(doc)


def parse_tree(text: str, g: Graph) -> CodingTree:
    """Rebuild a CodingTree from TreeDocument JSON, checked against g."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid tree document JSON: {exc}") from None
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(
            f"unsupported tree document version {doc.get('format_version')!r}"
        )
    if doc.get("graph_fingerprint") != graph_fingerprint(g):
        raise ConsistencyError("tree document was produced for a different graph")

    t = CodingTree(g)
    root = None
    for spec in doc["nodes"]:
        nd = CodingTreeNode(
            spec["id"], spec["parent"], spec["leaf_vertex"],
            spec["volume"], spec["cut"], spec["level"],
        )
        t.nodes[nd.id] = nd
        if spec["parent"] is None:
            if root is not None:
                raise ParseError("tree document contains two roots")
            root = nd.id
    if root is None:
        raise ParseError("tree document has no root")
    t.root = root
    for spec in doc["nodes"]:
        nd = t.nodes[spec["id"]]
        for c in spec["children"]:
            if c not in t.nodes:
                raise ParseError(f"node {spec['id']} lists unknown child {c}")
            nd._children[c] = None
    for nd in t.nodes.values():
        if not nd.is_leaf:
            nd.intra = (sum(t.nodes[c].cut for c in nd._children) - nd.cut) // 2
    t._next_id = max(t.nodes) + 1
    t._levels_dirty = True
    t.refresh_levels()
    _light_tree_check(t)
    return t
