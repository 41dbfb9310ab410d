"""Coding trees over a graph, their entropy, and the two mutation operators.

A coding tree is a rooted hierarchy whose leaves biject with graph
vertices; every node stands for the vertex set covered by its leaves. The
entropy of a graph on a tree charges each non-root node
``-(cut/vol(V)) * log2(vol(node)/vol(parent))`` bits; the two mutators
(combine: wrap two root children under a new node; drop: splice an inner
node out) admit closed-form entropy deltas, which is what makes greedy
minimization cheap.

Node caches (volume, cut, intra-edge count) are updated in O(1) per
mutation. Levels and subtree heights are recomputed lazily: mutations mark
them dirty and every reader that needs them calls ``refresh_levels()``,
so hot loops never pay per-subtree walks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import ConsistencyError, InputError
from .graph import Graph

LOG_BASE = 2  # entropies are reported in bits


class CodingTreeNode:
    """One node of a coding tree.

    ``leaf_vertex`` is the graph vertex for leaves and None for internal
    nodes. ``volume``/``cut`` cache the vertex-set statistics of the
    node's marker; ``intra`` counts edges joining two *distinct* children
    (the quantity the drop delta needs).
    """

    __slots__ = ("id", "parent", "_children", "leaf_vertex", "volume", "cut",
                 "level", "intra", "subtree_h")

    def __init__(self, node_id: int, parent: int | None, leaf_vertex: int | None,
                 volume: int, cut: int, level: int):
        self.id = node_id
        self.parent = parent
        self._children: dict[int, None] = {}
        self.leaf_vertex = leaf_vertex
        self.volume = volume
        self.cut = cut
        self.level = level
        self.intra = 0
        self.subtree_h = 0

    @property
    def children(self) -> list[int]:
        """Child ids in deterministic (insertion) order."""
        return list(self._children)

    @property
    def is_leaf(self) -> bool:
        return not self._children

    def __repr__(self) -> str:
        kind = f"leaf v{self.leaf_vertex}" if self.leaf_vertex is not None else "inner"
        return f"Node({self.id}, {kind}, vol={self.volume}, cut={self.cut})"


class CodingTree:
    """Arena of nodes plus the root id and the graph being encoded."""

    __slots__ = ("nodes", "root", "graph", "_next_id", "_levels_dirty")

    def __init__(self, graph: Graph):
        self.graph = graph
        self.nodes: dict[int, CodingTreeNode] = {}
        self.root: int = -1
        self._next_id = 0
        self._levels_dirty = False

    def new_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i

    def node(self, node_id: int) -> CodingTreeNode:
        return self.nodes[node_id]

    @property
    def height(self) -> int:
        """Maximum leaf level (root is level 0)."""
        self.refresh_levels()
        return self.nodes[self.root].subtree_h

    def refresh_levels(self) -> None:
        """Recompute node levels and subtree heights from the structure."""
        if not self._levels_dirty:
            return
        order = [self.root]
        self.nodes[self.root].level = 0
        cap = len(self.nodes)  # a corrupted cyclic arena must not hang us
        for nid in order:  # grows during iteration: BFS
            if len(order) > cap:
                break
            nd = self.nodes[nid]
            for c in nd._children:
                child = self.nodes.get(c)
                if child is not None:  # dangling ids are validate()'s business
                    child.level = nd.level + 1
                    order.append(c)
        for nid in reversed(order):
            nd = self.nodes[nid]
            heights = [self.nodes[c].subtree_h for c in nd._children if c in self.nodes]
            nd.subtree_h = 1 + max(heights) if heights else 0
        self._levels_dirty = False

    def leaf_vertices_under(self, node_id: int) -> list[int]:
        """Graph vertices covered by a node (its marker)."""
        out, stack = [], [node_id]
        while stack:
            nd = self.nodes[stack.pop()]
            if nd.leaf_vertex is not None:
                out.append(nd.leaf_vertex)
            else:
                stack.extend(nd._children)
        return out

    def canonical_form(self):
        """Order-insensitive nested representation of the hierarchy.

        Leaves map to their vertex id; internal nodes map to the sorted
        tuple of child forms. Two trees encode the same hierarchy iff
        their canonical forms are equal.
        """
        def form(nid):
            nd = self.nodes[nid]
            if nd.leaf_vertex is not None:
                return nd.leaf_vertex
            return tuple(sorted((form(c) for c in nd._children), key=repr))
        return form(self.root)


@dataclass
class EntropyReport:
    """Total entropy in bits plus the per-node term breakdown."""

    total: float
    per_node: dict[int, float] = field(default_factory=dict)
    log_base: int = LOG_BASE


def _node_term(cut: int, vol: int, parent_vol: int, total_volume: int) -> float:
    # 0*log(0) := 0 covers degree-0 leaves; cut <= vol so vol == 0 implies cut == 0.
    if total_volume == 0 or cut == 0 or vol == parent_vol:
        return 0.0
    return -(cut / total_volume) * math.log2(vol / parent_vol)


def trivial_tree(g: Graph) -> CodingTree:
    """Height-1 tree: a root with one leaf child per vertex."""
    if g.num_vertices == 0:
        raise InputError("cannot build a coding tree over an empty graph")
    t = CodingTree(g)
    n = g.num_vertices
    root = CodingTreeNode(n, None, None, g.total_volume, 0, 0)
    root.intra = g.num_edges
    root.subtree_h = 1
    t.nodes[n] = root
    t.root = n
    for v in range(n):
        leaf = CodingTreeNode(v, n, v, int(g.degree[v]), int(g.degree[v]), 1)
        t.nodes[v] = leaf
        root._children[v] = None
    t._next_id = n + 1
    return t


def _check_same_graph(g: Graph, t: CodingTree) -> None:
    if t.graph is g:
        return
    if (t.graph.num_vertices != g.num_vertices
            or t.graph.total_volume != g.total_volume):
        raise ConsistencyError(
            "tree was built over a different graph "
            f"(n={t.graph.num_vertices}, vol={t.graph.total_volume}) than the one "
            f"supplied (n={g.num_vertices}, vol={g.total_volume})"
        )


def tree_entropy(g: Graph, t: CodingTree) -> EntropyReport:
    """Structural entropy of g on coding tree t, with per-node terms.

    Uses the node caches; ``recompute_entropy`` is the cache-free oracle.
    """
    _check_same_graph(g, t)
    leaves = [nd.leaf_vertex for nd in t.nodes.values() if nd.is_leaf]
    if sorted(v for v in leaves if v is not None) != list(range(g.num_vertices)):
        raise ConsistencyError("tree leaves do not biject with graph vertices")
    if g.total_volume == 0:
        warnings.warn("graph has no edges; structural entropy is 0 by convention")
        return EntropyReport(0.0, {nid: 0.0 for nid in t.nodes if nid != t.root})

    vol_total = g.total_volume
    per_node: dict[int, float] = {}
    for nid, nd in t.nodes.items():
        if nid == t.root:
            continue
        parent_vol = t.nodes[nd.parent].volume
        per_node[nid] = _node_term(nd.cut, nd.volume, parent_vol, vol_total)
    return EntropyReport(total=math.fsum(per_node.values()), per_node=per_node)


def recompute_entropy(g: Graph, t: CodingTree) -> float:
    """Debug oracle: evaluate the entropy from scratch, ignoring all caches.

    Markers, volumes and cuts are rederived from the graph, so a stale
    cache cannot contaminate the result.
    """
    vol_total = int(g.degree.sum())
    if vol_total == 0:
        return 0.0
    deg = g.degree
    markers: dict[int, set[int]] = {}
    order = [t.root]
    for nid in order:
        order.extend(t.nodes[nid]._children)
    for nid in reversed(order):
        nd = t.nodes[nid]
        if nd.leaf_vertex is not None:
            markers[nid] = {nd.leaf_vertex}
        else:
            markers[nid] = set().union(*(markers[c] for c in nd._children))
    terms = []
    for nid in t.nodes:
        if nid == t.root:
            continue
        members = markers[nid]
        vol = sum(int(deg[v]) for v in members)
        cut = sum(1 for v in members for u in t.graph.neighbors(v) if u not in members)
        pvol = sum(int(deg[v]) for v in markers[t.nodes[nid].parent])
        terms.append(_node_term(cut, vol, pvol, vol_total))
    return math.fsum(terms)


def one_dim_entropy(g: Graph) -> float:
    """Closed-form entropy of the height-1 tree: the degree distribution."""
    vol = g.total_volume
    if vol == 0:
        warnings.warn("graph has no edges; structural entropy is 0 by convention")
        return 0.0
    return math.fsum(
        -(d / vol) * math.log2(d / vol) for d in (int(x) for x in g.degree) if d > 0
    )


def combine_delta(cut12: int, vol1: int, vol2: int, total_volume: int) -> float:
    """Closed-form entropy change of merging two root children."""
    if total_volume == 0 or cut12 == 0:
        return 0.0
    return (2.0 * cut12 / total_volume) * math.log2((vol1 + vol2) / total_volume)


def drop_delta(intra: int, vol: int, parent_vol: int, total_volume: int) -> float:
    """Closed-form entropy change of splicing out an inner node."""
    if total_volume == 0 or intra == 0 or vol == 0:
        return 0.0
    return (2.0 * intra / total_volume) * math.log2(parent_vol / vol)


def _apply_combine(t: CodingTree, c1: int, c2: int, cut12: int) -> tuple[int, float]:
    """Structural combine with precomputed pair cut; returns (new id, delta)."""
    root = t.nodes[t.root]
    n1, n2 = t.nodes[c1], t.nodes[c2]
    new_id = t.new_id()
    merged = CodingTreeNode(
        new_id, t.root, None,
        n1.volume + n2.volume,
        n1.cut + n2.cut - 2 * cut12,
        1,
    )
    merged.intra = cut12
    merged._children[c1] = None
    merged._children[c2] = None
    n1.parent = new_id
    n2.parent = new_id
    del root._children[c1]
    del root._children[c2]
    root._children[new_id] = None
    root.intra -= cut12
    t.nodes[new_id] = merged
    t._levels_dirty = True
    return new_id, combine_delta(cut12, n1.volume, n2.volume, t.graph.total_volume)


def combine(t: CodingTree, c1: int, c2: int) -> tuple[int, float]:
    """Insert a new node over two root children; returns (new id, delta <= 0)."""
    if c1 == c2:
        raise InputError("combine needs two distinct nodes")
    root = t.nodes[t.root]
    for c in (c1, c2):
        if c not in root._children:
            raise InputError(f"node {c} is not a child of the root")
    set1 = set(t.leaf_vertices_under(c1))
    set2 = set(t.leaf_vertices_under(c2))
    small, other = (set1, set2) if len(set1) <= len(set2) else (set2, set1)
    cut12 = sum(1 for v in small for u in t.graph.neighbors(v) if u in other)
    return _apply_combine(t, c1, c2, cut12)


def _apply_drop(t: CodingTree, v: int) -> float:
    nd = t.nodes[v]
    parent = t.nodes[nd.parent]
    delta = drop_delta(nd.intra, nd.volume, parent.volume, t.graph.total_volume)
    del parent._children[v]
    for c in nd._children:  # adopted in their existing order, appended at the end
        parent._children[c] = None
        t.nodes[c].parent = parent.id
    parent.intra += nd.intra
    del t.nodes[v]
    t._levels_dirty = True
    return delta


def drop(t: CodingTree, v: int) -> float:
    """Remove inner node v, its parent adopting the children; delta >= 0."""
    if v not in t.nodes:
        raise InputError(f"node {v} does not exist")
    nd = t.nodes[v]
    if v == t.root:
        raise InputError("cannot drop the root")
    if nd.is_leaf:
        raise InputError(f"cannot drop leaf node {v}")
    return _apply_drop(t, v)


def insert_unary(t: CodingTree, child: int) -> int:
    """Insert a pass-through node between ``child`` and its parent.

    The new node copies the child's marker, so the entropy change is
    exactly zero (its volume ratio is 1 and the child's new ratio is 1).
    """
    nd = t.nodes[child]
    if nd.parent is None:
        raise InputError("cannot insert a node above the root")
    parent = t.nodes[nd.parent]
    new_id = t.new_id()
    pad = CodingTreeNode(new_id, parent.id, None, nd.volume, nd.cut, nd.level)
    pad._children[child] = None
    # splice in place of the child to keep sibling order stable
    items = list(parent._children)
    parent._children.clear()
    for c in items:
        parent._children[new_id if c == child else c] = None
    nd.parent = new_id
    t.nodes[new_id] = pad
    t._levels_dirty = True
    return new_id


def validate(t: CodingTree, g: Graph) -> list[str]:
    """Check the coding-tree axioms and all node caches; return violations.

    An empty list means: single root covering exactly the vertex set,
    sibling markers disjoint and unioning to the parent marker, leaves in
    bijection with vertices, and volume/cut/level/intra caches all
    consistent with a from-scratch recomputation.
    """
    issues: list[str] = []
    if t.root not in t.nodes:
        return [f"structure: root id {t.root} missing from arena"]
    t.refresh_levels()

    roots = [nid for nid, nd in t.nodes.items() if nd.parent is None]
    if roots != [t.root]:
        issues.append(f"axiom-1: parentless nodes {sorted(roots)} != [{t.root}]")

    # reachability: every arena node exactly once; shared children break axiom 3
    seen: set[int] = set()
    stack = [t.root]
    while stack:
        nid = stack.pop()
        if nid in seen:
            issues.append(f"axiom-3: node {nid} reachable twice (markers overlap)")
            continue
        seen.add(nid)
        nd = t.nodes.get(nid)
        if nd is None:
            issues.append(f"structure: child id {nid} missing from arena")
            continue
        for c in nd._children:
            if c in t.nodes and t.nodes[c].parent != nid:
                issues.append(f"structure: node {c} parent pointer != {nid}")
            stack.append(c)
    for nid in t.nodes:
        if nid not in seen:
            issues.append(f"structure: node {nid} unreachable from root")

    # axiom 4: leaves biject with vertices; leaf_vertex set iff childless
    leaf_map: dict[int, int] = {}
    for nid, nd in t.nodes.items():
        if nd.is_leaf:
            if nd.leaf_vertex is None:
                issues.append(f"axiom-4: leaf {nid} not attached to a graph vertex")
            elif nd.leaf_vertex in leaf_map:
                issues.append(
                    f"axiom-4: vertex {nd.leaf_vertex} covered by leaves "
                    f"{leaf_map[nd.leaf_vertex]} and {nid}"
                )
            elif not (0 <= nd.leaf_vertex < g.num_vertices):
                issues.append(f"axiom-4: leaf {nid} names unknown vertex {nd.leaf_vertex}")
            else:
                leaf_map[nd.leaf_vertex] = nid
        elif nd.leaf_vertex is not None:
            issues.append(f"axiom-4: internal node {nid} carries leaf vertex")
    missing = set(range(g.num_vertices)) - set(leaf_map)
    if missing:
        issues.append(f"axiom-4: vertices {sorted(missing)} have no leaf")

    if issues:
        return issues  # cache checks need a structurally sound tree

    # axiom 2/3 via markers + cache consistency
    deg = g.degree
    markers: dict[int, set[int]] = {}
    order = [t.root]
    for nid in order:
        order.extend(t.nodes[nid]._children)
    for nid in reversed(order):
        nd = t.nodes[nid]
        if nd.leaf_vertex is not None:
            markers[nid] = {nd.leaf_vertex}
        else:
            kids = [markers[c] for c in nd._children]
            union: set[int] = set()
            total = 0
            for s in kids:
                union |= s
                total += len(s)
            if total != len(union):
                issues.append(f"axiom-3: children markers of node {nid} not disjoint")
            markers[nid] = union
    if markers[t.root] != set(range(g.num_vertices)):
        issues.append("axiom-1: root marker is not the full vertex set")

    expected_level = {t.root: 0}
    for nid in order:
        nd = t.nodes[nid]
        for c in nd._children:
            expected_level[c] = expected_level[nid] + 1
    for nid in order:
        nd = t.nodes[nid]
        members = markers[nid]
        vol = sum(int(deg[v]) for v in members)
        cut = sum(1 for v in members for u in g.neighbors(v) if u not in members)
        if nd.volume != vol:
            issues.append(f"cache: node {nid} volume {nd.volume} != {vol}")
        if nd.cut != cut:
            issues.append(f"cache: node {nid} cut {nd.cut} != {cut}")
        if nd.level != expected_level[nid]:
            issues.append(f"cache: node {nid} level {nd.level} != {expected_level[nid]}")
        if not nd.is_leaf:
            child_cut_sum = sum(t.nodes[c].cut for c in nd._children)
            intra = (child_cut_sum - cut) // 2
            if nd.intra != intra:
                issues.append(f"cache: node {nid} intra {nd.intra} != {intra}")
    return issues
