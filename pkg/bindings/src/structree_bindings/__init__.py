"""Flat-array client for the structree CLI.

Graph-learning pipelines want trees as plain integer arrays, not object
graphs. This package shells out to the ``structree`` executable (its only
contact with the core is the CLI and the tree-document JSON format) and
decodes the result into parallel arrays indexed by node id.

The edge-list interface cannot express isolated vertices, so inputs must
cover every vertex id in [0, num_vertices); the one exception is the
single-vertex graph with no edges, which is handled locally.
"""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__version__ = "0.1.0"
__all__ = ["FlatTree", "py_entropy", "py_minimize"]


@dataclass
class FlatTree:
    """A coding tree as parallel arrays indexed by dense node id.

    ``parent[i]`` is -1 exactly at the root; ``leaf_vertex[i]`` is the
    graph vertex for leaves and -1 for internal nodes.
    """

    parent: np.ndarray
    level: np.ndarray
    leaf_vertex: np.ndarray
    entropy_bits: float

    @property
    def num_nodes(self) -> int:
        return int(self.parent.size)

    @property
    def root(self) -> int:
        return int(np.flatnonzero(self.parent == -1)[0])

    @property
    def height(self) -> int:
        return int(self.level.max())


def _cli_executable() -> str:
    exe = os.environ.get("STRUCTREE_CLI", "structree")
    found = shutil.which(exe)
    if found is None:
        raise RuntimeError(
            f"cannot find the {exe!r} executable; install the core package "
            "or point STRUCTREE_CLI at it"
        )
    return found


def _run_cli(args: list[str]) -> dict:
    proc = subprocess.run(
        [_cli_executable(), *args], capture_output=True, text=True
    )
    if proc.returncode != 0:
        try:
            message = json.loads(proc.stderr)["error"]
        except (json.JSONDecodeError, KeyError):
            message = proc.stderr.strip() or f"exit code {proc.returncode}"
        raise ValueError(message)
    return json.loads(proc.stdout)


def _check_edges(edge_array, num_vertices: int) -> np.ndarray:
    edges = np.asarray(edge_array, dtype=np.int64)
    if edges.size == 0:
        edges = edges.reshape(0, 2)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise ValueError(f"edge array must be M x 2, got shape {edges.shape}")
    if num_vertices < 1:
        raise ValueError(f"num_vertices must be positive, got {num_vertices}")
    if edges.size:
        lo, hi = int(edges.min()), int(edges.max())
        if lo < 0 or hi >= num_vertices:
            raise ValueError(
                f"vertex ids must lie in [0, {num_vertices}), found {lo}..{hi}"
            )
    used = set(np.unique(edges).tolist())
    missing = [v for v in range(num_vertices) if v not in used]
    if missing and not (num_vertices == 1 and edges.shape[0] == 0):
        raise ValueError(
            "the edge-list interface cannot express isolated vertices "
            f"(no edges touch {missing[:5]}{'...' if len(missing) > 5 else ''})"
        )
    return edges


def _edge_text(edges: np.ndarray) -> str:
    return "".join(f"{u} {v}\n" for u, v in edges.tolist())


def _single_vertex_tree(k: int) -> FlatTree:
    # mirrors the core's padded construction: leaf 0, root 1, pads 2..k
    # inserted round by round directly below the root
    n_nodes = k + 1
    parent = np.full(n_nodes, -1, dtype=np.int64)
    level = np.zeros(n_nodes, dtype=np.int64)
    leaf_vertex = np.full(n_nodes, -1, dtype=np.int64)
    chain = [1] + list(range(k, 1, -1)) + [0]  # root, pads newest-first, leaf
    for depth, nid in enumerate(chain):
        level[nid] = depth
        if depth:
            parent[nid] = chain[depth - 1]
    leaf_vertex[0] = 0
    return FlatTree(parent=parent, level=level, leaf_vertex=leaf_vertex,
                    entropy_bits=0.0)


def py_entropy(edge_array, num_vertices: int) -> float:
    """One-dimensional structural entropy of the graph, in bits."""
    edges = _check_edges(edge_array, num_vertices)
    if num_vertices == 1 and edges.shape[0] == 0:
        return 0.0
    with tempfile.TemporaryDirectory(prefix="structree-ffi-") as tmp:
        path = Path(tmp) / "graph.txt"
        path.write_text(_edge_text(edges))
        payload = _run_cli(["entropy", "--input", str(path)])
    return float(payload["result"]["h1_bits"])


def py_minimize(edge_array, num_vertices: int, k: int) -> FlatTree:
    """Minimum-entropy coding tree of height k as flat arrays."""
    edges = _check_edges(edge_array, num_vertices)
    if num_vertices == 1 and edges.shape[0] == 0:
        if k < 2:
            raise ValueError(f"height must be at least 2, got {k}")
        return _single_vertex_tree(k)
    with tempfile.TemporaryDirectory(prefix="structree-ffi-") as tmp:
        graph_path = Path(tmp) / "graph.txt"
        tree_path = Path(tmp) / "tree.json"
        graph_path.write_text(_edge_text(edges))
        _run_cli([
            "minimize", "--input", str(graph_path), "--height", str(k),
            "--output", str(tree_path),
        ])
        doc = json.loads(tree_path.read_text())

    nodes = sorted(doc["nodes"], key=lambda nd: nd["id"])
    dense = {nd["id"]: i for i, nd in enumerate(nodes)}
    parent = np.full(len(nodes), -1, dtype=np.int64)
    level = np.zeros(len(nodes), dtype=np.int64)
    leaf_vertex = np.full(len(nodes), -1, dtype=np.int64)
    for i, nd in enumerate(nodes):
        if nd["parent"] is not None:
            parent[i] = dense[nd["parent"]]
        level[i] = nd["level"]
        if nd["leaf_vertex"] is not None:
            leaf_vertex[i] = nd["leaf_vertex"]
    return FlatTree(parent=parent, level=level, leaf_vertex=leaf_vertex,
                    entropy_bits=float(doc["entropy_bits"]))
