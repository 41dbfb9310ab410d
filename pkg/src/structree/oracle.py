"""Exhaustive ground truth for small graphs.

Enumerates every coding hierarchy of a given height, evaluates the entropy
with a closed-form partition formula that never touches the tree
machinery, and reports the greedy minimizer's optimality gap. Size caps
are hard errors: an oracle that silently subsamples is worthless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ConfigError, InputError, SizeCapError
from .graph import Graph, build_graph
from .minimize import MinimizeConfig, minimize
from .tree import CodingTree, CodingTreeNode

HEIGHT2_VERTEX_CAP = 12   # B(12) = 4,213,597 candidate partitions
HEIGHTK_VERTEX_CAP = 8
HEIGHTK_HEIGHT_CAP = 3


@dataclass
class OracleResult:
    optimal_entropy: float
    optimal_partition: tuple
    num_candidates: int
    greedy_entropy: float
    gap: float


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of range(n) as restricted growth strings.

    Lexicographic RGS order: position i carries the block label of element
    i, and a label may exceed the running maximum by at most one. The
    order is the canonical candidate indexing for oracle results.
    """
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield tuple(a)
        i = n - 1
        while i >= 1 and a[i] >= b[i]:
            i -= 1
        if i < 1:
            return
        a[i] += 1
        nb = max(b[i], a[i] + 1)
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = nb


def bell_number(n: int) -> int:
    """Number of set partitions of an n-element set (Bell triangle)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def partition_entropy(g: Graph, labels: Sequence[int]) -> float:
    """Entropy of the height-2 tree induced by a vertex partition.

    Closed form, independent of the CodingTree code path: one term per
    block against the whole graph, one term per vertex against its block.
    Singleton blocks match the unary-padded tree representation exactly.
    """
    vol_total = g.total_volume
    if vol_total == 0:
        return 0.0
    nblocks = max(labels) + 1
    vol = [0] * nblocks
    cut = [0] * nblocks
    deg = g.degree
    for v, lab in enumerate(labels):
        vol[lab] += int(deg[v])
    for u, v in g.edge_array.tolist():
        if labels[u] != labels[v]:
            cut[labels[u]] += 1
            cut[labels[v]] += 1
    log2 = math.log2
    acc = 0.0
    for b in range(nblocks):
        if cut[b] and vol[b] != vol_total:
            acc -= cut[b] * (log2(vol[b]) - log2(vol_total))
    for v, lab in enumerate(labels):
        d = int(deg[v])
        if d and d != vol[lab]:
            acc -= d * (log2(d) - log2(vol[lab]))
    return acc / vol_total


def blocks_from_labels(labels: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Canonical partition: blocks sorted internally and by first member."""
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, []).append(v)
    return tuple(sorted(tuple(sorted(b)) for b in groups.values()))


def tree_from_partition(g: Graph, blocks: Sequence[Sequence[int]]) -> CodingTree:
    """Materialize a partition as a height-2 coding tree.

    Singleton blocks become a unary inner node over the leaf so the tree
    formally has height 2 (an entropy-neutral padding).
    """
    t = CodingTree(g)
    n = g.num_vertices
    deg = g.degree
    t._next_id = n
    root = CodingTreeNode(t.new_id(), None, None, g.total_volume, 0, 0)
    root.subtree_h = 2
    t.nodes[root.id] = root
    t.root = root.id
    for block in blocks:
        members = set(block)
        vol = sum(int(deg[v]) for v in block)
        cut = sum(1 for v in block for u in g.neighbors(v) if u not in members)
        inner = CodingTreeNode(t.new_id(), root.id, None, vol, cut, 1)
        inner.subtree_h = 1
        t.nodes[inner.id] = inner
        root._children[inner.id] = None
        for v in sorted(block):
            leaf = CodingTreeNode(v, inner.id, v, int(deg[v]), int(deg[v]), 2)
            t.nodes[v] = leaf
            inner._children[v] = None
        inner.intra = (sum(t.nodes[c].cut for c in inner._children) - cut) // 2
    # every edge is intra to exactly one internal node
    root.intra = g.num_edges - sum(t.nodes[c].intra for c in root._children)
    return t


def _greedy_entropy(g: Graph, k: int) -> float:
    _, trace = minimize(g, MinimizeConfig(height_k=k))
    return trace.final_entropy


def optimal_height2(g: Graph) -> OracleResult:
    """Minimum-entropy height-2 tree by full set-partition enumeration."""
    n = g.num_vertices
    if n == 0:
        raise InputError("empty graph")
    if n > HEIGHT2_VERTEX_CAP:
        raise SizeCapError(
            f"height-2 oracle is capped at {HEIGHT2_VERTEX_CAP} vertices "
            f"(B({HEIGHT2_VERTEX_CAP}) = {bell_number(HEIGHT2_VERTEX_CAP):,} "
            f"candidates); got n = {n}"
        )
    best = math.inf
    best_labels: tuple[int, ...] | None = None
    count = 0
    for labels in set_partitions(n):
        count += 1
        h = partition_entropy(g, labels)
        if h < best:
            best = h
            best_labels = labels
    greedy = _greedy_entropy(g, 2)
    return OracleResult(
        optimal_entropy=best,
        optimal_partition=blocks_from_labels(best_labels),
        num_candidates=count,
        greedy_entropy=greedy,
        gap=greedy - best,
    )


def optimal_heightk(g: Graph, k: int) -> OracleResult:
    """Minimum entropy over all nested hierarchies of depth exactly k.

    Enumerates weak refinement chains (a block may pass through a level
    unchanged, which is the unary-padding case), memoized per (vertex
    subset, remaining height).
    """
    n = g.num_vertices
    if n == 0:
        raise InputError("empty graph")
    if k < 2:
        raise ConfigError(f"height must be at least 2, got {k}")
    if n > HEIGHTK_VERTEX_CAP or k > HEIGHTK_HEIGHT_CAP:
        raise SizeCapError(
            f"height-k oracle is capped at n <= {HEIGHTK_VERTEX_CAP}, "
            f"k <= {HEIGHTK_HEIGHT_CAP}; got n = {n}, k = {k}"
        )
    vol_total = g.total_volume
    deg = g.degree
    log2 = math.log2

    @lru_cache(maxsize=None)
    def stats(members: frozenset) -> tuple[int, int]:
        vol = sum(int(deg[v]) for v in members)
        cut = sum(1 for v in members for u in g.neighbors(v) if u not in members)
        return vol, cut

    def child_term(child: frozenset, parent_vol: int) -> float:
        vol, cut = stats(child)
        if vol_total == 0 or cut == 0 or vol == parent_vol:
            return 0.0
        return -(cut / vol_total) * (log2(vol) - log2(parent_vol))

    @lru_cache(maxsize=None)
    def best(members: frozenset, h: int) -> tuple[float, tuple, int]:
        """(min entropy inside the subtree, structure, candidate count)."""
        if h == 0:
            if len(members) == 1:
                return 0.0, next(iter(members)), 1
            return math.inf, (), 0
        elems = sorted(members)
        parent_vol, _ = stats(members)
        best_cost = math.inf
        best_struct: tuple = ()
        total_count = 0
        for labels in set_partitions(len(elems)):
            blocks = [frozenset(elems[i] for i in range(len(elems)) if labels[i] == lab)
                      for lab in range(max(labels) + 1)]
            cost = 0.0
            structs = []
            combos = 1
            for blk in blocks:
                sub_cost, sub_struct, sub_count = best(blk, h - 1)
                if sub_count == 0:
                    combos = 0
                    break
                cost += child_term(blk, parent_vol) + sub_cost
                structs.append(sub_struct)
                combos *= sub_count
            if combos == 0:
                continue
            total_count += combos
            if cost < best_cost:
                best_cost = cost
                best_struct = tuple(sorted(structs, key=repr))
        return best_cost, best_struct, total_count

    full = frozenset(range(n))
    cost, struct, count = best(full, k)
    greedy = _greedy_entropy(g, k)
    return OracleResult(
        optimal_entropy=cost,
        optimal_partition=struct,
        num_candidates=count,
        greedy_entropy=greedy,
        gap=greedy - cost,
    )


def connected_graph_catalog(max_n: int) -> list[Graph]:
    """All connected graphs with 1..max_n vertices, one per isomorphism class.

    Backed by the networkx Graph Atlas (complete up to 7 vertices).
    """
    if max_n > 7:
        raise SizeCapError("the graph atlas only covers up to 7 vertices")
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for G in graph_atlas_g():
        if 1 <= len(G) <= max_n and nx.is_connected(G):
            out.append(build_graph(len(G), list(G.edges())))
    return out


def greedy_gap_report(graphs: Sequence[Graph], k: int = 2) -> dict:
    """Machine-readable gap summary over a graph collection (JSON-able)."""
    gaps = []
    for g in graphs:
        res = optimal_height2(g) if k == 2 else optimal_heightk(g, k)
        gaps.append(res.gap)
    gaps_sorted = sorted(gaps)
    p95 = gaps_sorted[min(len(gaps_sorted) - 1, int(math.ceil(0.95 * len(gaps_sorted))) - 1)]
    return {
        "k": k,
        "num_graphs": len(graphs),
        "gaps": gaps,
        "max_gap": max(gaps),
        "mean_gap": sum(gaps) / len(gaps),
        "p95_gap": p95,
        "zero_gap_fraction": sum(1 for x in gaps if x <= 1e-9) / len(gaps),
    }
