"""Synthetic graph generators and the minimize() timing/recovery harness.

Generators are deterministic under (family, params, seed) and never emit
self-loops or duplicate edges. The scaling run times the minimizer per
size and fits a log-log slope of wall time against edge count, which is
how the near-linear runtime expectation is checked at desk scale.
"""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .graph import Graph, build_graph
from .minimize import MinimizeConfig, minimize

FAMILIES = ("uniform-random", "preferential-attachment", "planted-partition")


@dataclass
class GeneratorSpec:
    family: str
    n: int
    parameter: float | int | dict
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; pick one of {FAMILIES}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")


@dataclass
class ScalingReport:
    rows: list[dict] = field(default_factory=list)
    fit_exponent: float | None = None


@dataclass
class RecoveryResult:
    mean_agreement: float
    per_seed: list[float] = field(default_factory=list)


def _pair_index_to_edge(idx: np.ndarray, n: int) -> np.ndarray:
    """Invert the linear index over upper-triangle pairs (row-major)."""
    t = idx.astype(np.float64)
    i = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8 * t)) / 2).astype(np.int64)
    # float sqrt can land one row off; nudge back onto the right row
    offset = i * (2 * n - i - 1) // 2
    too_big = offset > idx
    while too_big.any():
        i[too_big] -= 1
        offset = i * (2 * n - i - 1) // 2
        too_big = offset > idx
    next_offset = (i + 1) * (2 * n - i - 2) // 2
    too_small = idx >= next_offset
    while too_small.any():
        i[too_small] += 1
        next_offset = (i + 1) * (2 * n - i - 2) // 2
        too_small = idx >= next_offset
    offset = i * (2 * n - i - 1) // 2
    j = idx - offset + i + 1
    return np.stack([i, j], axis=1)


def _uniform_random_edges(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"edge probability must be in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if total == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if p == 1.0:
        return _pair_index_to_edge(np.arange(total, dtype=np.int64), n)
    m = int(rng.binomial(total, p))
    chosen = np.zeros(0, dtype=np.int64)
    while chosen.size < m:
        need = m - chosen.size
        draw = rng.integers(0, total, size=need + max(16, need // 16), dtype=np.int64)
        chosen = np.unique(np.concatenate([chosen, draw]))
    if chosen.size > m:  # drop surplus uniformly, not by index order
        keep = rng.choice(chosen.size, size=m, replace=False)
        chosen = np.sort(chosen[keep])
    return _pair_index_to_edge(chosen, n)


def _preferential_attachment_edges(n: int, m_attach: int,
                                   rng: np.random.Generator) -> np.ndarray:
    if m_attach < 1 or m_attach >= n:
        raise ConfigError(f"attachment degree must be in [1, n), got {m_attach}")
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    for v in range(m_attach):  # seed star keeps early degrees nonzero
        if v:
            edges.append((0, v))
            repeated += [0, v]
    for v in range(m_attach, n):
        targets: set[int] = set()
        while len(targets) < m_attach:
            if repeated:
                pick = repeated[int(rng.integers(0, len(repeated)))]
            else:
                pick = int(rng.integers(0, v))
            targets.add(pick)
        for u in sorted(targets):
            edges.append((u, v))
            repeated += [u, v]
    return np.array(edges, dtype=np.int64).reshape(-1, 2)


def _planted_partition(n: int, blocks: int, p_in: float, p_out: float,
                       rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    if blocks < 1 or blocks > n:
        raise ConfigError(f"block count must be in [1, n], got {blocks}")
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{name} must be in [0, 1], got {p}")
    labels = np.array([v * blocks // n for v in range(n)], dtype=np.int64)
    u, v = np.triu_indices(n, k=1)
    prob = np.where(labels[u] == labels[v], p_in, p_out)
    keep = rng.random(u.size) < prob
    edges = np.stack([u[keep], v[keep]], axis=1).astype(np.int64)
    return edges, labels


def generate(spec: GeneratorSpec) -> tuple[Graph, np.ndarray | None]:
    """Deterministic graph for a generator spec; planted family also returns labels."""
    rng = np.random.default_rng(spec.seed)
    if spec.family == "uniform-random":
        edges = _uniform_random_edges(spec.n, float(spec.parameter), rng)
        return build_graph(spec.n, edges), None
    if spec.family == "preferential-attachment":
        edges = _preferential_attachment_edges(spec.n, int(spec.parameter), rng)
        return build_graph(spec.n, edges), None
    params = spec.parameter
    if not isinstance(params, dict):
        raise ConfigError("planted-partition parameter must be "
                          "{'blocks':…, 'p_in':…, 'p_out':…}")
    edges, labels = _planted_partition(
        spec.n, int(params["blocks"]), float(params["p_in"]), float(params["p_out"]), rng
    )
    return build_graph(spec.n, edges), labels


def scaling_run(
    family: str,
    sizes: Sequence[int],
    k: int,
    repeats: int = 3,
    parameter: float | int | dict | None = None,
    seed: int = 0,
) -> ScalingReport:
    """Time minimize() per size (median of repeats) and fit a log-log slope."""
    if list(sizes) != sorted(sizes):
        raise ConfigError("sizes must be ascending")
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    rows = []
    for n in sizes:
        param = parameter if parameter is not None else _default_parameter(family, n)
        g, _ = generate(GeneratorSpec(family=family, n=n, parameter=param, seed=seed))
        samples = []
        h_max = 0
        for _ in range(repeats):
            gc_was_on = gc.isenabled()
            gc.disable()
            try:
                t0 = time.perf_counter()
                _, trace = minimize(g, MinimizeConfig(height_k=k))
                total_ms = (time.perf_counter() - t0) * 1000.0
            finally:
                if gc_was_on:
                    gc.enable()
            samples.append((total_ms, trace.stage1_ms, trace.stage2_ms))
            h_max = trace.stage1_height
        samples.sort()
        med = samples[len(samples) // 2]
        rows.append({
            "n": g.num_vertices,
            "m": g.num_edges,
            "stage1_ms": med[1],
            "stage2_ms": med[2],
            "total_ms": med[0],
            "h_max": h_max,
        })
    rows.sort(key=lambda r: r["m"])
    fit = None
    if len(rows) >= 2:
        xs = np.log([max(r["m"], 1) for r in rows])
        ys = np.log([max(r["total_ms"], 1e-6) for r in rows])
        fit = float(np.polyfit(xs, ys, 1)[0])
    return ScalingReport(rows=rows, fit_exponent=fit)


def _default_parameter(family: str, n: int):
    # average degree ~16 keeps edge count the scaling variable
    if family == "uniform-random":
        return min(1.0, 16.0 / max(n - 1, 1))
    if family == "preferential-attachment":
        return min(8, max(1, n - 1))
    return {"blocks": 2, "p_in": 0.9, "p_out": 0.05}


def partition_agreement(predicted: Sequence[Sequence[int]], labels: np.ndarray) -> float:
    """Best-matching exact agreement between predicted modules and true blocks."""
    from scipy.optimize import linear_sum_assignment

    n = int(labels.size)
    nblocks = int(labels.max()) + 1 if n else 0
    conf = np.zeros((len(predicted), nblocks), dtype=np.int64)
    for i, module in enumerate(predicted):
        for v in module:
            conf[i, labels[v]] += 1
    rows, cols = linear_sum_assignment(-conf)
    return float(conf[rows, cols].sum()) / n


def recovery_run(blocks: int, p_in: float, p_out: float, n: int,
                 seeds: Iterable[int]) -> RecoveryResult:
    """Mean agreement of minimize(k=2) level-1 modules with planted blocks."""
    if not p_in > p_out:
        raise ConfigError(f"need p_in > p_out, got {p_in} <= {p_out}")
    per_seed = []
    for seed in seeds:
        g, labels = generate(GeneratorSpec(
            family="planted-partition", n=n,
            parameter={"blocks": blocks, "p_in": p_in, "p_out": p_out}, seed=seed,
        ))
        tree, _ = minimize(g, MinimizeConfig(height_k=2))
        modules = [tree.leaf_vertices_under(c)
                   for c in tree.nodes[tree.root].children]
        per_seed.append(partition_agreement(modules, labels))
    return RecoveryResult(
        mean_agreement=float(np.mean(per_seed)), per_seed=per_seed
    )
