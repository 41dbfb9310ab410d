"""Deterministic math of the contrastive framework.

The temperature-scaled contrastive loss over two embedding views, plus the
parameter-free bottom-up feature aggregation over a coding tree. Both are
pure functions; learned weights are out of scope, so the aggregation
accepts identity or a seeded fixed random projection in the slot where a
trained per-level map would sit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InputError
from .tree import CodingTree

DENOMINATOR_MODES = ("standard", "literal-eq3")


@dataclass
class EmbeddingBatch:
    """Paired N x d embedding views with a softmax temperature.

    ``literal-eq3`` excludes the positive pair from the denominator, which
    is the loss exactly as printed; ``standard`` (the default) includes it,
    matching common practice.
    """

    view1: np.ndarray
    view2: np.ndarray
    temperature: float
    denominator_mode: str = "standard"

    def __post_init__(self):
        self.view1 = np.asarray(self.view1, dtype=float)
        self.view2 = np.asarray(self.view2, dtype=float)
        if self.view1.ndim != 2 or self.view1.shape != self.view2.shape:
            raise InputError(
                f"views must share an N x d shape, got {self.view1.shape} "
                f"and {self.view2.shape}"
            )
        if self.view1.shape[0] < 2:
            raise InputError("need at least 2 samples (the denominator is empty otherwise)")
        if not self.temperature > 0:
            raise InputError(f"temperature must be positive, got {self.temperature}")
        if self.denominator_mode not in DENOMINATOR_MODES:
            raise InputError(f"denominator_mode must be one of {DENOMINATOR_MODES}")


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DomainError("cosine similarity of a zero vector is undefined")
    return float(a @ b / (na * nb))


def ntxent_loss(batch: EmbeddingBatch, stabilized: bool = True) -> tuple[np.ndarray, float]:
    """Per-sample and mean contrastive loss over the batch.

    ``stabilized`` subtracts the row max before exponentiation; the raw
    path exists so the stabilization itself can be checked.
    """
    v1, v2 = batch.view1, batch.view2
    n1 = np.linalg.norm(v1, axis=1)
    n2 = np.linalg.norm(v2, axis=1)
    if (n1 == 0).any() or (n2 == 0).any():
        raise DomainError("embedding rows must be nonzero for cosine similarity")
    sims = (v1 / n1[:, None]) @ (v2 / n2[:, None]).T / batch.temperature
    n = sims.shape[0]

    if batch.denominator_mode == "literal-eq3":
        masked = sims.copy()
        np.fill_diagonal(masked, -np.inf)
    else:
        masked = sims

    if stabilized:
        m = masked.max(axis=1)
        log_denom = m + np.log(np.exp(masked - m[:, None]).sum(axis=1))
    else:
        log_denom = np.log(np.exp(masked).sum(axis=1))

    per_sample = -(np.diag(sims) - log_denom)
    return per_sample, float(per_sample.mean())


def identity_transform(layer: int, x: np.ndarray) -> np.ndarray:
    return x


def random_projection_transform(seed: int) -> Callable[[int, np.ndarray], np.ndarray]:
    """Fixed seeded d -> d projection per layer (a stand-in for a trained map)."""

    def transform(layer: int, x: np.ndarray) -> np.ndarray:
        d = x.shape[-1]
        rng = np.random.default_rng([seed, layer, d])
        mat = rng.standard_normal((d, d)) / np.sqrt(d)
        return x @ mat

    return transform


@dataclass
class TreeFeatures:
    """Feature vectors for every tree node, grouped by level (root = 0)."""

    per_level: list[dict[int, np.ndarray]]
    leaf_input: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def root_vector(self) -> np.ndarray:
        return next(iter(self.per_level[0].values()))


def tree_aggregate(
    t: CodingTree,
    leaf_input: dict[int, np.ndarray],
    transform: Callable[[int, np.ndarray], np.ndarray] = identity_transform,
) -> TreeFeatures:
    """Bottom-up sum-and-transform over the tree; the root vector is h_T.

    ``leaf_input`` maps graph vertex ids to vectors. Internal nodes sum
    their children (in child-id order, so reordering children cannot
    change the result) and apply ``transform(layer, ...)`` where layer
    counts from the bottom: the root receives layer = height.
    """
    t.refresh_levels()
    height = t.nodes[t.root].subtree_h
    per_level: list[dict[int, np.ndarray]] = [{} for _ in range(height + 1)]
    feats: dict[int, np.ndarray] = {}

    order = [t.root]
    for nid in order:
        order.extend(t.nodes[nid]._children)
    for nid in reversed(order):
        nd = t.nodes[nid]
        if nd.leaf_vertex is not None:
            if nd.leaf_vertex not in leaf_input:
                raise InputError(f"missing feature for leaf vertex {nd.leaf_vertex}")
            vec = np.asarray(leaf_input[nd.leaf_vertex], dtype=float)
        else:
            total = None
            for c in sorted(nd._children):
                total = feats[c] if total is None else total + feats[c]
            vec = transform(height - nd.level, total)
        feats[nid] = vec
        per_level[nd.level][nid] = vec
    return TreeFeatures(per_level=per_level, leaf_input=dict(leaf_input))
