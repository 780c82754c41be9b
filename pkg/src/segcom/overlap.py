"""Overlap phase: replicate nodes into adjacent communities that want them.

Runs after the non-overlapping game. For every node and every adjacent
community it does not belong to, the copy is accepted when the overlap gain
beats the community's own threshold: ``gamma`` times the average entropy
cost its current members would incur by leaving.

All gains and thresholds are evaluated against the frozen statistics of the
input partition; copies never feed back into the statistics. Decisions are
therefore independent per node, the output does not depend on visit order,
and the phase parallelizes without any synchronization.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from .entropy import delta_leave, delta_overlap, internal_weights
from .game import DetectorConfig, PartitionState
from .graph import Cover, Graph

__all__ = ["overlap_threshold", "overlap_thresholds", "detect_overlapping"]


def overlap_threshold(graph: Graph, state: PartitionState, members: list[int],
                      gamma: float) -> float:
    """gamma/|C| times the summed leave costs of the community's members."""
    cid = state.assignment[members[0]]
    stats = state.stats(cid)
    v_lam = graph.total_volume
    total = 0.0
    for x in members:
        acc, loop = internal_weights(graph, x, state.assignment)
        internal = acc.get(cid, 0.0) + loop
        total -= delta_leave(v_lam, stats, graph.vol_deg[x],
                             graph.cut_deg[x], internal, loop)
    return gamma * total / len(members)


def overlap_thresholds(graph: Graph, state: PartitionState,
                       gamma: float) -> dict[int, float]:
    """Threshold of every community of the partition."""
    return {cid: overlap_threshold(graph, state, members, gamma)
            for cid, members in state.communities().items()}


def _node_additions(graph: Graph, state: PartitionState,
                    thresholds: dict[int, float], node: int) -> list[int]:
    """Community ids (ascending) this node gets copied into."""
    cx = state.assignment[node]
    v_lam = graph.total_volume
    d_vol = graph.vol_deg[node]
    d_cut = graph.cut_deg[node]
    acc, loop = internal_weights(graph, node, state.assignment)
    out = []
    for c in sorted(acc):
        if c == cx:
            continue
        gain = delta_overlap(v_lam, state.stats(c), d_vol, d_cut,
                             acc[c] + loop, loop)
        if gain > thresholds[c]:
            out.append(c)
    return out


def detect_overlapping(graph: Graph, state: PartitionState,
                       config: Optional[DetectorConfig] = None) -> Cover:
    """Grow the partition into a cover by entropy-guided node replication.

    Every original membership is preserved; only additions occur. The
    returned cover lists communities by smallest original member id, with
    replicas merged in.
    """
    config = config or DetectorConfig()
    thresholds = overlap_thresholds(graph, state, config.gamma)
    nodes = [x for x in range(graph.node_count) if not graph.is_isolated(x)]

    if config.workers > 1:
        chunks = [nodes[i::config.workers] for i in range(config.workers)]

        def run(chunk: list[int]) -> list[tuple[int, int]]:
            return [(x, c) for x in chunk
                    for c in _node_additions(graph, state, thresholds, x)]

        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            additions = sorted(pair for part in pool.map(run, chunks) for pair in part)
    else:
        additions = [(x, c) for x in nodes
                     for c in _node_additions(graph, state, thresholds, x)]

    members = state.communities()
    extra: dict[int, set[int]] = {}
    for x, c in additions:
        extra.setdefault(c, set()).add(x)
    groups = []
    for cid, base in members.items():
        groups.append((base[0], set(base) | extra.get(cid, set())))
    groups.sort(key=lambda item: item[0])
    return Cover(comm for _, comm in groups)
