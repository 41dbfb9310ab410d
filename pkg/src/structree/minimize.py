"""Greedy structural-entropy minimization to a fixed-height coding tree.

Two stages over the trivial (height-1) tree:

1. repeatedly wrap the pair of root children whose merge reduces entropy
   the most, until the root has at most two children (full binary tree);
2. while the tree is taller than the target height k, splice out the
   inner node whose removal raises entropy the least.

Stage 1 runs on a lazy min-heap of candidate pairs keyed by the closed-form
merge delta; only pairs with a positive cut are enqueued, and a pair entry
stays valid exactly as long as both endpoints remain root children, so
staleness is a cheap aliveness test. Zero-cut merges (disconnected graphs)
fall back to pairing the two smallest-volume children. Stage 2 uses a lazy
min-heap over inner nodes; a node's drop cost only ever grows (its parent
volume and intra-edge count are monotone under drops), so stale entries are
underestimates and the pop-validate-repush pattern is exact.

Tie-breaking is lexicographic on node ids throughout, which makes runs
byte-reproducible.
"""

from __future__ import annotations

import heapq
import math
import random
import time
import warnings
from dataclasses import dataclass, field

from .errors import ConfigError, InputError, InternalError
from .graph import Graph
from .tree import (
    CodingTree,
    CodingTreeNode,
    _apply_combine,
    _apply_drop,
    drop_delta,
    insert_unary,
    one_dim_entropy,
    trivial_tree,
)

DROP_MODES = ("literal", "height-aware")


@dataclass
class MinimizeConfig:
    """Knobs for the greedy minimizer.

    The algorithm is deterministic; ``seed`` is only recorded in the trace
    so reruns can be audited against the tie-breaking rule.
    """

    height_k: int
    pad_to_exact_height: bool = True
    drop_mode: str = "literal"
    seed: int = 0

    def __post_init__(self):
        if self.height_k < 2:
            raise ConfigError(f"height must be at least 2, got {self.height_k}")
        if self.drop_mode not in DROP_MODES:
            raise ConfigError(f"drop_mode must be one of {DROP_MODES}")


@dataclass
class TraceStep:
    kind: str  # combine | drop | pad
    node_ids: tuple[int, ...]
    delta: float
    entropy_after: float


@dataclass
class MinimizeTrace:
    """Ordered mutation log: combines, then drops, then pad rounds."""

    steps: list[TraceStep] = field(default_factory=list)
    initial_entropy: float = 0.0
    final_entropy: float = 0.0
    stage1_height: int = 0
    seed: int = 0
    stage1_ms: float = 0.0  # wall time, recorded for the scaling harness
    stage2_ms: float = 0.0

    @property
    def combines(self) -> int:
        return sum(1 for s in self.steps if s.kind == "combine")

    @property
    def drops(self) -> int:
        return sum(1 for s in self.steps if s.kind == "drop")

    @property
    def pads(self) -> int:
        return sum(len(s.node_ids) for s in self.steps if s.kind == "pad")


class MinimizerState:
    """Tree plus the heaps and cut bookkeeping the greedy loops need.

    Stage-1 bookkeeping is keyed by stable *representative* ids so that a
    growing cluster never has its whole neighborhood rekeyed: merging two
    children keeps the rep with the larger neighbor map and rewires only
    the smaller side. Heap entries store the merge delta at push time;
    volume growth can only weaken a pair's reduction, so stale entries
    stay safe until popped (they get tightened and repushed), and cut
    growth is accompanied by an exact fresh entry.
    """

    def __init__(self, g: Graph, cfg: MinimizeConfig):
        if g.num_vertices == 0:
            raise InputError("cannot minimize over an empty graph")
        self.graph = g
        self.cfg = cfg
        self.tree = trivial_tree(g)
        self.vol_total = g.total_volume
        self._init_stage1()
        self._stage2_ready = False

    # ------------------------------------------------------------------ stage 1

    def _init_stage1(self) -> None:
        g = self.graph
        deg = g.degree
        n = g.num_vertices
        # rep id -> current tree node id and back; leaves start as themselves
        self.alias: dict[int, int] = {v: v for v in range(n)}
        self.rev_alias: dict[int, int] = {v: v for v in range(n)}
        self.cutmap: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        pairs = g.edge_array
        for u, v in pairs.tolist():
            self.cutmap[u][v] = 1
            self.cutmap[v][u] = 1
        if self.vol_total > 0 and g.num_edges:
            vol_total = self.vol_total
            degs = deg.tolist()
            log2 = math.log2
            # entry = (delta, node_min, node_max, rep_a, rep_b); the node ids
            # give the lexicographic tie-break and are refreshed on tighten.
            # Scalar log2 keeps keys bit-identical with later recomputations.
            self.pair_heap = [
                ((2.0 / vol_total) * log2((degs[u] + degs[v]) / vol_total), u, v, u, v)
                for u, v in pairs.tolist()
            ]
        else:
            self.pair_heap = []
        heapq.heapify(self.pair_heap)
        # fallback for zero-reduction merges: two smallest volumes
        self.vol_heap = [(int(deg[v]), v) for v in range(n)]
        heapq.heapify(self.vol_heap)
        self.sub_h: dict[int, int] = {v: 0 for v in range(n)}

    def root_child_count(self) -> int:
        return len(self.tree.nodes[self.tree.root]._children)

    def _rep_volume(self, rep: int) -> int:
        return self.tree.nodes[self.alias[rep]].volume

    def _settle_pair_heap(self) -> None:
        """Discard dead entries and tighten stale ones until the top is exact.

        A stale entry always carries a key at least as aggressive as the
        pair's current delta (volumes only grow, which weakens a merge, and
        cut growth pushes a fresh exact entry), so tightening the top until
        it verifies yields the true argmax.
        """
        heap, alias = self.pair_heap, self.alias
        nodes = self.tree.nodes
        cutmap = self.cutmap
        vol_total = self.vol_total
        log2 = math.log2
        heappop, heapreplace = heapq.heappop, heapq.heapreplace
        while heap:
            entry = heap[0]
            ra, rb = entry[3], entry[4]
            na = alias.get(ra)
            nb = alias.get(rb)
            if na is None or nb is None:
                heappop(heap)
                continue
            true = (2.0 * cutmap[ra][rb] / vol_total) * log2(
                (nodes[na].volume + nodes[nb].volume) / vol_total
            )
            if true != entry[0]:
                if na > nb:
                    na, nb = nb, na
                heapreplace(heap, (true, na, nb, ra, rb))
                continue
            return

    def best_combine_pair(self) -> tuple[tuple[int, int], float]:
        """Pair of root children with maximal entropy reduction (peek only).

        Returned ids are current tree node ids; equal-key ties resolve
        lexicographically on the (min id, max id) node pair.
        """
        if self.root_child_count() <= 2:
            raise InternalError("combine candidates requested with <= 2 root children")
        self._settle_pair_heap()
        heap = self.pair_heap
        if heap and heap[0][0] < 0.0:
            delta, na, nb, _, _ = heap[0]
            return (na, nb), -delta
        # no positive reduction anywhere: pair the two smallest volumes
        first = self._pop_smallest_volume(exclude=-1)
        second = self._pop_smallest_volume(exclude=first[1])
        heapq.heappush(self.vol_heap, first)
        heapq.heappush(self.vol_heap, second)
        na, nb = self.alias[first[1]], self.alias[second[1]]
        return (min(na, nb), max(na, nb)), 0.0

    def _pop_smallest_volume(self, exclude: int) -> tuple[int, int]:
        heap = self.vol_heap
        while heap:
            vol, rep = heap[0]
            if (rep not in self.alias or self._rep_volume(rep) != vol
                    or rep == exclude):
                heapq.heappop(heap)
                continue
            return heapq.heappop(heap)
        raise InternalError("volume heap exhausted with children remaining")

    def apply_combine(self, node_a: int, node_b: int) -> tuple[int, float]:
        ra = self.rev_alias[node_a]
        rb = self.rev_alias[node_b]
        cmap = self.cutmap
        ma, mb = cmap[ra], cmap[rb]
        cut12 = ma.pop(rb, 0)
        mb.pop(ra, None)
        new_id, delta = _apply_combine(self.tree, node_a, node_b, cut12)
        self.sub_h[new_id] = 1 + max(self.sub_h[node_a], self.sub_h[node_b])

        keep, dead = (ra, rb) if len(ma) >= len(mb) else (rb, ra)
        big, small = (ma, mb) if keep == ra else (mb, ma)
        del self.alias[dead]
        del self.rev_alias[node_a]
        del self.rev_alias[node_b]
        del cmap[dead]
        self.alias[keep] = new_id
        self.rev_alias[new_id] = keep

        new_vol = self.tree.nodes[new_id].volume
        vol_total = self.vol_total
        heap = self.pair_heap
        alias = self.alias
        nodes = self.tree.nodes
        log2 = math.log2
        heappush = heapq.heappush
        for x, c in small.items():
            mx = cmap[x]
            mx.pop(dead, None)
            total = mx.get(keep, 0) + c
            mx[keep] = total
            big[x] = total
            nx = alias[x]
            d = (2.0 * total / vol_total) * log2(
                (new_vol + nodes[nx].volume) / vol_total
            )
            if nx < new_id:
                heappush(heap, (d, nx, new_id, keep, x))
            else:
                heappush(heap, (d, new_id, nx, keep, x))
        heapq.heappush(self.vol_heap, (new_vol, keep))
        return new_id, delta

    # ------------------------------------------------------------------ stage 2

    @classmethod
    def from_tree(cls, g: Graph, cfg: MinimizeConfig, tree: CodingTree) -> "MinimizerState":
        """Wrap an existing tree so stage-2 queries can run against it."""
        state = cls.__new__(cls)
        state.graph = g
        state.cfg = cfg
        state.tree = tree
        state.vol_total = g.total_volume
        state._stage2_ready = False
        tree.refresh_levels()
        state.sub_h = {tree.root: tree.nodes[tree.root].subtree_h}
        state.prepare_stage2()
        return state

    def prepare_stage2(self) -> None:
        """Build the drop heap and the leaf-depth tracker.

        Drops remove inner nodes but never reorder leaves, so each node
        covers a contiguous range in a fixed depth-first leaf order; tree
        height is then a running range-add/global-max over leaf depths.
        """
        if self._stage2_ready:
            return
        t = self.tree
        # DFS assigns every node its leaf interval and every leaf its depth
        self.leaf_range: dict[int, tuple[int, int]] = {}
        depths: list[int] = []
        stack: list[tuple[int, int, bool]] = [(t.root, 0, False)]
        while stack:
            nid, depth, done = stack.pop()
            if done:
                kids = self.tree.nodes[nid]._children
                los = [self.leaf_range[c][0] for c in kids]
                his = [self.leaf_range[c][1] for c in kids]
                self.leaf_range[nid] = (min(los), max(his))
                continue
            nd = t.nodes[nid]
            if nd.is_leaf:
                self.leaf_range[nid] = (len(depths), len(depths) + 1)
                depths.append(depth)
            else:
                stack.append((nid, depth, True))
                for c in reversed(nd.children):
                    stack.append((c, depth + 1, False))
        self.depth_tracker = _MaxAddSegTree(depths)

        entries = []
        for nid, nd in t.nodes.items():
            if nid == t.root or nd.is_leaf:
                continue
            pvol = t.nodes[nd.parent].volume
            inc = drop_delta(nd.intra, nd.volume, pvol, self.vol_total)
            entries.append((inc, nid, nd.intra, pvol))
        heapq.heapify(entries)
        self.drop_heap = entries
        self._stage2_ready = True

    @property
    def height(self) -> int:
        if self._stage2_ready:
            return self.depth_tracker.overall_max()
        return self.sub_h[self.tree.root]

    def _current_increase(self, nid: int) -> float:
        nd = self.tree.nodes[nid]
        return drop_delta(nd.intra, nd.volume, self.tree.nodes[nd.parent].volume,
                          self.vol_total)

    def best_drop_node(self, mode: str) -> tuple[int, float]:
        """Inner node whose removal raises entropy least (peek only).

        ``literal`` considers every inner node, as the update rule is
        written; ``height-aware`` restricts to ancestors of maximum-depth
        leaves so each drop makes progress toward the height bar (it
        rescans the deep paths per call, which is fine at desk scale).
        """
        self.prepare_stage2()
        t = self.tree
        if mode == "height-aware":
            target = self.height
            depth: dict[int, int] = {t.root: 0}
            deepest: dict[int, int] = {}
            order = [t.root]
            for nid in order:
                nd = t.nodes[nid]
                for c in nd._children:
                    depth[c] = depth[nid] + 1
                    order.append(c)
            for nid in reversed(order):
                nd = t.nodes[nid]
                if nd.is_leaf:
                    deepest[nid] = depth[nid]
                else:
                    deepest[nid] = max(deepest[c] for c in nd._children)
            best: tuple[float, int] | None = None
            for nid in order:
                nd = t.nodes[nid]
                if nid == t.root or nd.is_leaf or deepest[nid] != target:
                    continue
                cand = (self._current_increase(nid), nid)
                if best is None or cand < best:
                    best = cand
            if best is None:
                raise InternalError("no droppable node on the deep path")
            return best[1], best[0]

        heap = self.drop_heap
        nodes = t.nodes
        while heap:
            inc, nid, intra, pvol = heap[0]
            nd = nodes.get(nid)
            if nd is None or not nd._children:
                heapq.heappop(heap)
                continue
            true_pvol = nodes[nd.parent].volume
            if nd.intra != intra or true_pvol != pvol:
                # a drop key only ever grows; repush its current value
                heapq.heapreplace(heap, (
                    drop_delta(nd.intra, nd.volume, true_pvol, self.vol_total),
                    nid, nd.intra, true_pvol,
                ))
                continue
            return nid, inc
        raise InternalError("no droppable inner node although height exceeds target")

    def apply_drop(self, nid: int) -> float:
        self.prepare_stage2()
        lo, hi = self.leaf_range[nid]
        self.depth_tracker.add_range(lo, hi, -1)
        return _apply_drop(self.tree, nid)


class _MaxAddSegTree:
    """Range add / global max over a fixed array (leaf depths)."""

    __slots__ = ("size", "tree", "pending")

    def __init__(self, values: list[int]):
        size = 1
        while size < max(len(values), 1):
            size *= 2
        self.size = size
        self.tree = [0] * (2 * size)
        self.pending = [0] * (2 * size)
        self.tree[size:size + len(values)] = values
        for i in range(size - 1, 0, -1):
            self.tree[i] = max(self.tree[2 * i], self.tree[2 * i + 1])

    def add_range(self, lo: int, hi: int, delta: int) -> None:
        """Add delta to values[lo:hi]."""
        self._add(1, 0, self.size, lo, hi, delta)

    def _add(self, node: int, node_lo: int, node_hi: int, lo: int, hi: int,
             delta: int) -> None:
        if hi <= node_lo or node_hi <= lo:
            return
        if lo <= node_lo and node_hi <= hi:
            self.tree[node] += delta
            self.pending[node] += delta
            return
        mid = (node_lo + node_hi) // 2
        self._add(2 * node, node_lo, mid, lo, hi, delta)
        self._add(2 * node + 1, mid, node_hi, lo, hi, delta)
        self.tree[node] = max(self.tree[2 * node], self.tree[2 * node + 1]) \
            + self.pending[node]

    def overall_max(self) -> int:
        return self.tree[1]


def best_combine_candidate(state: MinimizerState) -> tuple[tuple[int, int], float]:
    """Stage-1 argmax: (pair of root children, entropy reduction >= 0)."""
    return state.best_combine_pair()


def best_drop_candidate(state: MinimizerState, mode: str = "literal") -> tuple[int, float]:
    """Stage-2 argmin: (inner node id, entropy increase >= 0)."""
    if mode not in DROP_MODES:
        raise ConfigError(f"drop_mode must be one of {DROP_MODES}")
    return state.best_drop_node(mode)


def minimize(g: Graph, cfg: MinimizeConfig) -> tuple[CodingTree, MinimizeTrace]:
    """Run both greedy stages; return the height-k tree and the full trace."""
    with warnings.catch_warnings():
        if g.total_volume == 0:
            warnings.simplefilter("ignore")
        initial = one_dim_entropy(g)
    trace = MinimizeTrace(initial_entropy=initial, seed=cfg.seed)
    entropy = initial

    state = MinimizerState(g, cfg)
    t = state.tree

    t0 = time.perf_counter()
    while state.root_child_count() > 2:
        (a, b), _reduction = state.best_combine_pair()
        new_id, delta = state.apply_combine(a, b)
        entropy += delta
        trace.steps.append(TraceStep("combine", (a, b, new_id), delta, entropy))
    root_children = t.nodes[t.root]._children
    state.sub_h[t.root] = 1 + max((state.sub_h[c] for c in root_children), default=0)
    trace.stage1_height = state.height
    trace.stage1_ms = (time.perf_counter() - t0) * 1000.0

    t1 = time.perf_counter()
    k = cfg.height_k
    while state.height > k:
        nid, _inc = state.best_drop_node(cfg.drop_mode)
        delta = state.apply_drop(nid)
        entropy += delta
        trace.steps.append(TraceStep("drop", (nid,), delta, entropy))
    trace.stage2_ms = (time.perf_counter() - t1) * 1000.0

    if cfg.pad_to_exact_height:
        h = state.height
        while h < k:
            inserted = tuple(
                insert_unary(t, c) for c in t.nodes[t.root].children
            )
            h += 1
            trace.steps.append(TraceStep("pad", inserted, 0.0, entropy))

    trace.final_entropy = entropy
    t.refresh_levels()
    return t, trace


def rbbt(g: Graph, k: int, seed: int) -> CodingTree:
    """Randomly balanced binary tree of height k (baseline hierarchy).

    Vertices are shuffled with the seeded generator and recursively split
    into equal halves (+-1) per level; nodes one level above the bottom
    keep all their vertices as direct leaf children, so every leaf sits at
    level k.
    """
    if k < 2:
        raise ConfigError(f"height must be at least 2, got {k}")
    if g.num_vertices == 0:
        raise InputError("cannot build a tree over an empty graph")
    t = CodingTree(g)
    n = g.num_vertices
    deg = g.degree
    order = list(range(n))
    random.Random(seed).shuffle(order)

    t._next_id = n  # leaves reuse vertex ids

    def stats(members: list[int]) -> tuple[int, int]:
        ms = set(members)
        vol = sum(int(deg[v]) for v in members)
        cut = sum(1 for v in members for u in g.neighbors(v) if u not in ms)
        return vol, cut

    def build(members: list[int], level: int, parent: int | None) -> int:
        vol, cut = stats(members)
        nid = t.new_id()
        node = CodingTreeNode(nid, parent, None, vol, cut, level)
        t.nodes[nid] = node
        if level == k - 1:
            kids = []
            for v in members:
                leaf = CodingTreeNode(v, nid, v, int(deg[v]), int(deg[v]), k)
                t.nodes[v] = leaf
                node._children[v] = None
                kids.append(v)
        elif len(members) == 1:
            kids = [build(members, level + 1, nid)]
            node._children[kids[0]] = None
        else:
            mid = (len(members) + 1) // 2
            kids = [
                build(members[:mid], level + 1, nid),
                build(members[mid:], level + 1, nid),
            ]
            for c in kids:
                node._children[c] = None
        node.intra = (sum(t.nodes[c].cut for c in kids) - cut) // 2
        node.subtree_h = k - level
        return nid

    t.root = build(order, 0, None)
    return t
