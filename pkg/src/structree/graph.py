"""Immutable undirected simple graph with the degree/volume/cut primitives.

Everything downstream (entropy, trees, oracles) measures one of three
quantities on vertex sets: volume (sum of member degrees), cut (edges with
exactly one endpoint inside), and cut between two disjoint sets. They are
all computed here against a CSR adjacency so large benchmark graphs stay
cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class VertexSetStats:
    """Volume and boundary cut of a vertex subset."""

    volume: int
    cut: int


class Graph:
    """Undirected simple graph over dense 0-based vertex ids.

    Instances are immutable after construction (arrays are read-only), so
    they can be shared freely across workers. Use :func:`build_graph` to
    construct one; it normalizes self-loops and duplicate edges.
    """

    __slots__ = (
        "num_vertices",
        "edge_array",
        "degree",
        "total_volume",
        "self_loops_dropped",
        "duplicate_edges_collapsed",
        "_indptr",
        "_indices",
        "_adjacency_cache",
    )

    def __init__(
        self,
        num_vertices: int,
        edge_array: np.ndarray,
        self_loops_dropped: int = 0,
        duplicate_edges_collapsed: int = 0,
    ):
        self.num_vertices = int(num_vertices)
        self.edge_array = edge_array
        self.self_loops_dropped = self_loops_dropped
        self.duplicate_edges_collapsed = duplicate_edges_collapsed

        n = self.num_vertices
        deg = np.bincount(edge_array.ravel(), minlength=n).astype(np.int64)
        self.degree = deg
        self.total_volume = int(deg.sum())

        # CSR adjacency with sorted neighbor lists.
        src = np.concatenate([edge_array[:, 0], edge_array[:, 1]])
        dst = np.concatenate([edge_array[:, 1], edge_array[:, 0]])
        order = np.lexsort((dst, src))
        self._indices = dst[order]
        self._indptr = np.concatenate(
            [np.zeros(1, dtype=np.int64), np.cumsum(deg)]
        )
        self._adjacency_cache = None

        for arr in (self.edge_array, self.degree, self._indices, self._indptr):
            arr.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return self.edge_array.shape[0]

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Deduplicated edges as (u, v) tuples with u < v, sorted."""
        return [(int(u), int(v)) for u, v in self.edge_array]

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (read-only view)."""
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex sorted neighbor tuples (built on first access)."""
        if self._adjacency_cache is None:
            self._adjacency_cache = tuple(
                tuple(int(u) for u in self.neighbors(v))
                for v in range(self.num_vertices)
            )
        return self._adjacency_cache

    def __repr__(self) -> str:
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"

    # pickle support for process pools (slots class)
    def __getstate__(self):
        return (
            self.num_vertices,
            np.array(self.edge_array),
            self.self_loops_dropped,
            self.duplicate_edges_collapsed,
        )

    def __setstate__(self, state):
        n, arr, loops, dups = state
        self.__init__(n, arr, loops, dups)


def build_graph(num_vertices: int, edge_list: Sequence | np.ndarray) -> Graph:
    """Normalize an edge list into a Graph.

    Self-loops are dropped and duplicate edges collapsed; both are counted
    on the returned object. Raises InputError for out-of-range vertex ids,
    naming the first offending entry.
    """
    n = int(num_vertices)
    if n < 0:
        raise InputError(f"num_vertices must be >= 0, got {n}")

    arr = np.asarray(edge_list, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"edge list must be M x 2, got shape {arr.shape}")

    bad = (arr < 0) | (arr >= n)
    if bad.any():
        i = int(np.argwhere(bad.any(axis=1))[0][0])
        raise InputError(
            f"edge {i} = ({arr[i, 0]}, {arr[i, 1]}) has a vertex id outside [0, {n})"
        )

    loops = arr[:, 0] == arr[:, 1]
    n_loops = int(loops.sum())
    arr = arr[~loops]

    arr = np.sort(arr, axis=1)  # canonical (u, v) with u < v
    before = arr.shape[0]
    arr = np.unique(arr, axis=0) if before else arr
    n_dups = before - arr.shape[0]

    return Graph(n, arr, self_loops_dropped=n_loops, duplicate_edges_collapsed=n_dups)


def _as_member_array(g: Graph, members: Iterable[int], what: str) -> np.ndarray:
    arr = np.fromiter((int(v) for v in members), dtype=np.int64)
    if arr.size and ((arr < 0).any() or (arr >= g.num_vertices).any()):
        bad = arr[(arr < 0) | (arr >= g.num_vertices)][0]
        raise InputError(f"{what} contains vertex {bad} outside [0, {g.num_vertices})")
    return np.unique(arr)


def set_stats(g: Graph, members: Iterable[int]) -> VertexSetStats:
    """Volume and cut of a vertex set (Shannon-style set statistics)."""
    m = _as_member_array(g, members, "member set")
    if m.size == 0:
        return VertexSetStats(volume=0, cut=0)
    volume = int(g.degree[m].sum())
    mask = np.zeros(g.num_vertices, dtype=bool)
    mask[m] = True
    neigh = np.concatenate([g.neighbors(v) for v in m]) if m.size else m
    cut = int(np.count_nonzero(~mask[neigh]))
    return VertexSetStats(volume=volume, cut=cut)


def cut_between(g: Graph, a: Iterable[int], b: Iterable[int]) -> int:
    """Number of edges with one endpoint in a and the other in b.

    The two sets must be disjoint.
    """
    aa = _as_member_array(g, a, "set a")
    bb = _as_member_array(g, b, "set b")
    if aa.size and bb.size and np.intersect1d(aa, bb).size:
        common = int(np.intersect1d(aa, bb)[0])
        raise InputError(f"sets overlap (share vertex {common})")
    if aa.size == 0 or bb.size == 0:
        return 0
    # scan the side with smaller volume
    if int(g.degree[aa].sum()) > int(g.degree[bb].sum()):
        aa, bb = bb, aa
    mask = np.zeros(g.num_vertices, dtype=bool)
    mask[bb] = True
    neigh = np.concatenate([g.neighbors(v) for v in aa])
    return int(np.count_nonzero(mask[neigh]))
