"""Scriptable command-line front door.

Every successful invocation writes exactly one JSON report to stdout
(command, input fingerprint, result, timing, version); diagnostics and
--verbose chatter go to stderr. Exit codes: 0 success, 1 user/input
error, 2 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bench import scaling_run
from .contrast import EmbeddingBatch, ntxent_loss
from .errors import InputError, StructreeError
from .graph import Graph
from .io_formats import (
    canonical_json,
    graph_fingerprint,
    parse_edge_list,
    parse_tree,
    parse_tudataset,
    serialize_tree,
)
from .minimize import MinimizeConfig, minimize, rbbt
from .oracle import optimal_height2, optimal_heightk
from .tree import one_dim_entropy, tree_entropy


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_graph(path: str) -> Graph:
    return parse_edge_list(_read_text(path)).graph


def _sha(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


def cmd_entropy(args) -> tuple[dict, str]:
    g = _load_graph(args.input)
    if args.tree:
        t = parse_tree(_read_text(args.tree), g)
        report = tree_entropy(g, t)
        result = {
            "tree_entropy_bits": report.total,
            "per_node_terms": {str(k): v for k, v in sorted(report.per_node.items())},
        }
    else:
        result = {"h1_bits": one_dim_entropy(g)}
    return result, graph_fingerprint(g)


def cmd_minimize(args) -> tuple[dict, str]:
    g = _load_graph(args.input)
    cfg = MinimizeConfig(
        height_k=args.height,
        pad_to_exact_height=not args.no_pad,
        drop_mode=args.drop_mode,
    )
    tree, trace = minimize(g, cfg)
    report = tree_entropy(g, tree)
    doc = serialize_tree(tree, report, trace)
    Path(args.output).write_text(doc)
    result = {
        "initial_entropy": trace.initial_entropy,
        "final_entropy": trace.final_entropy,
        "combines": trace.combines,
        "drops": trace.drops,
        "pads": trace.pads,
        "height": tree.nodes[tree.root].subtree_h,
        "output": args.output,
    }
    if args.trace:
        result["steps"] = [
            {"kind": s.kind, "node_ids": list(s.node_ids), "delta": s.delta,
             "entropy_after": s.entropy_after}
            for s in trace.steps
        ]
    return result, graph_fingerprint(g)


def cmd_oracle(args) -> tuple[dict, str]:
    g = _load_graph(args.input)
    res = optimal_height2(g) if args.height == 2 else optimal_heightk(g, args.height)
    result = {
        "optimal_entropy": res.optimal_entropy,
        "greedy_entropy": res.greedy_entropy,
        "gap": res.gap,
        "num_candidates": res.num_candidates,
        "optimal_partition": res.optimal_partition,
    }
    return result, graph_fingerprint(g)


def cmd_rbbt(args) -> tuple[dict, str]:
    g = _load_graph(args.input)
    if args.trials > 1:
        values = []
        for seed in range(args.seed, args.seed + args.trials):
            t = rbbt(g, args.height, seed)
            values.append(tree_entropy(g, t).total)
        result = {
            "trials": args.trials,
            "seed_start": args.seed,
            "mean": float(np.mean(values)),
            "min": float(np.min(values)),
            "max": float(np.max(values)),
        }
    else:
        t = rbbt(g, args.height, args.seed)
        result = {"entropy_bits": tree_entropy(g, t).total, "seed": args.seed}
    return result, graph_fingerprint(g)


def _entropy_pair(payload) -> tuple[float, float]:
    g, k = payload
    _, trace = minimize(g, MinimizeConfig(height_k=k))
    return trace.initial_entropy, trace.final_entropy


def cmd_dataset(args) -> tuple[dict, str]:
    bundle = parse_tudataset(args.tudataset, args.name)
    graphs = bundle.graphs
    result = {
        "name": bundle.name,
        "num_graphs": len(graphs),
        "num_classes": len(set(bundle.labels)) if bundle.labels else None,
        "avg_nodes": float(np.mean([g.num_vertices for g in graphs])),
        "avg_edges": float(np.mean([g.num_edges for g in graphs])),
        "warnings": len(bundle.warnings),
    }
    if args.minimize_height:
        work = [(g, args.minimize_height) for g in graphs]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                pairs = list(pool.map(_entropy_pair, work, chunksize=16))
        else:
            pairs = [_entropy_pair(w) for w in work]
        result["entropy_summary"] = {
            "height": args.minimize_height,
            "mean_initial_entropy": float(np.mean([p[0] for p in pairs])),
            "mean_final_entropy": float(np.mean([p[1] for p in pairs])),
        }
    fp = _sha("".join(graph_fingerprint(g) for g in graphs))
    return result, fp


def _load_matrix(path: str) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"cannot parse {path} as a numeric CSV matrix: {exc}") from None


def cmd_loss(args) -> tuple[dict, str]:
    v1 = _load_matrix(args.view1)
    v2 = _load_matrix(args.view2)
    batch = EmbeddingBatch(v1, v2, temperature=args.tau, denominator_mode=args.mode)
    per_sample, mean = ntxent_loss(batch)
    result = {
        "per_sample": [float(x) for x in per_sample],
        "mean": mean,
        "mode": args.mode,
        "temperature": args.tau,
    }
    fp = _sha(_read_text(args.view1) + _read_text(args.view2))
    return result, fp


def cmd_bench(args) -> tuple[dict, str]:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = scaling_run(
        family=args.family,
        sizes=sizes,
        k=args.height,
        repeats=args.repeats,
        parameter=args.param,
        seed=args.seed,
    )
    result = {"rows": report.rows, "fit_exponent": report.fit_exponent}
    fp = _sha(f"{args.family}|{sizes}|{args.height}|{args.repeats}|{args.seed}|{args.param}")
    return result, fp


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="structree",
        description="Structural entropy of graphs over coding trees",
    )
    p.add_argument("--verbose", action="store_true", help="human summary on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("entropy", help="one-dimensional or tree entropy of a graph")
    sp.add_argument("--input", required=True, help="edge-list file")
    sp.add_argument("--tree", help="tree document JSON for tree entropy")
    sp.set_defaults(handler=cmd_entropy)

    sp = sub.add_parser("minimize", help="greedy entropy minimization to height K")
    sp.add_argument("--input", required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--drop-mode", choices=("literal", "height-aware"), default="literal")
    sp.add_argument("--no-pad", action="store_true",
                    help="allow final height below K instead of unary padding")
    sp.add_argument("--trace", action="store_true", help="include full step log")
    sp.add_argument("--output", required=True, help="tree document destination")
    sp.set_defaults(handler=cmd_minimize)

    sp = sub.add_parser("oracle", help="brute-force optimum and greedy gap")
    sp.add_argument("--input", required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.set_defaults(handler=cmd_oracle)

    sp = sub.add_parser("rbbt", help="randomly balanced binary tree baseline")
    sp.add_argument("--input", required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1)
    sp.set_defaults(handler=cmd_rbbt)

    sp = sub.add_parser("dataset", help="multi-graph benchmark statistics")
    sp.add_argument("--tudataset", required=True, help="dataset directory")
    sp.add_argument("--name", required=True)
    sp.add_argument("--minimize-height", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(handler=cmd_dataset)

    sp = sub.add_parser("loss", help="contrastive loss over two embedding CSVs")
    sp.add_argument("--view1", required=True)
    sp.add_argument("--view2", required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--mode", choices=("standard", "literal-eq3"), default="standard")
    sp.set_defaults(handler=cmd_loss)

    sp = sub.add_parser("bench", help="minimize() wall-time scaling report")
    sp.add_argument("--family", default="uniform-random")
    sp.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    sp.add_argument("--height", type=int, default=2)
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--param", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(handler=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        result, fingerprint = args.handler(args)
    except InputError as exc:
        json.dump({"error": str(exc), "kind": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except StructreeError as exc:
        json.dump({"error": str(exc), "kind": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except Exception as exc:  # noqa: BLE001 -- last-resort internal error
        json.dump({"error": f"{type(exc).__name__}: {exc}", "kind": "internal"},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    report = {
        "command": args.command,
        "input_fingerprint": fingerprint,
        "result": result,
        "timing_ms": (time.perf_counter() - start) * 1000.0,
        "version": __version__,
    }
    print(canonical_json(report))
    if args.verbose:
        print(f"[structree] {args.command} ok in {report['timing_ms']:.1f} ms",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
