"""Structural entropy of undirected graphs over coding trees.

Library surface: build graphs, evaluate tree entropy, minimize it to a
fixed-height hierarchy, certify against brute-force oracles, parse the
common graph file formats, and benchmark the minimizer.
"""

__version__ = "0.1.0"

from .bench import (
    GeneratorSpec,
    RecoveryResult,
    ScalingReport,
    generate,
    partition_agreement,
    recovery_run,
    scaling_run,
)
from .contrast import (
    EmbeddingBatch,
    TreeFeatures,
    cosine_similarity,
    identity_transform,
    ntxent_loss,
    random_projection_transform,
    tree_aggregate,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    FormatError,
    InputError,
    InternalError,
    ParseError,
    SizeCapError,
    StructreeError,
)
from .graph import Graph, VertexSetStats, build_graph, cut_between, set_stats
from .io_formats import (
    DatasetBundle,
    EdgeListResult,
    canonical_json,
    graph_fingerprint,
    parse_edge_list,
    parse_tree,
    parse_tudataset,
    round12,
    serialize_edge_list,
    serialize_tree,
)
from .minimize import (
    MinimizeConfig,
    MinimizerState,
    MinimizeTrace,
    TraceStep,
    best_combine_candidate,
    best_drop_candidate,
    minimize,
    rbbt,
)
from .oracle import (
    OracleResult,
    bell_number,
    connected_graph_catalog,
    greedy_gap_report,
    optimal_height2,
    optimal_heightk,
    partition_entropy,
    set_partitions,
    tree_from_partition,
)
from .tree import (
    CodingTree,
    CodingTreeNode,
    EntropyReport,
    combine,
    drop,
    insert_unary,
    one_dim_entropy,
    recompute_entropy,
    tree_entropy,
    trivial_tree,
    validate,
)
