"""Community detection by structural-entropy minimization in a node game.

The package detects non-overlapping communities by letting nodes play best
response against a two-level structural-entropy potential, then optionally
grows the partition into an overlapping cover with an entropy-guided
replication pass. Works on undirected or directed, weighted or unweighted
graphs.

Typical use::

    from segcom import parse_edge_list, detect_nonoverlapping, detect_overlapping

    graph = parse_edge_list(open("network.txt").read())
    state = detect_nonoverlapping(graph)
    cover = detect_overlapping(graph, state)
"""

from .entropy import (CommunityStats, EntropyDomainError, delta_leave,
                      delta_leave_after_join, delta_overlap, delta_transfer,
                      entropy_2d, internal_weights, join_stats, leave_stats,
                      node_entropy_baseline)
from .game import (DetectorConfig, PartitionState, Strategy, apply_transfer,
                   best_strategy, check_termination, detect_nonoverlapping,
                   init_singletons)
from .graph import (Cover, EdgeListParseError, Graph, GraphValidationError,
                    load_cover, parse_edge_list, write_cover)
from .metrics import MetricError, avg_f1, nmi, onmi, pair_f1
from .overlap import detect_overlapping, overlap_threshold, overlap_thresholds
from .report import REPORT_HEADER, RunReport
from .synth import edge_list_text, planted_partition, random_graph

__version__ = "0.1.0"

__all__ = [
    "CommunityStats", "Cover", "DetectorConfig", "EdgeListParseError",
    "EntropyDomainError", "Graph", "GraphValidationError", "MetricError",
    "PartitionState", "REPORT_HEADER", "RunReport", "Strategy",
    "apply_transfer", "avg_f1", "best_strategy", "check_termination",
    "delta_leave", "delta_leave_after_join", "delta_overlap", "delta_transfer",
    "detect_nonoverlapping", "detect_overlapping", "edge_list_text",
    "entropy_2d", "init_singletons", "internal_weights", "join_stats",
    "leave_stats", "load_cover", "nmi", "node_entropy_baseline", "onmi",
    "overlap_threshold", "overlap_thresholds", "pair_f1", "parse_edge_list",
    "planted_partition", "random_graph", "write_cover",
]
