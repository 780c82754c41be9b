"""Non-overlapping detection: iterative best response over node moves.

Every node starts as its own community. Sweeps visit each node, score the
stay/transfer options with the constant-time entropy deltas, and apply the
best move immediately. The loop stops when a sweep moves nothing or when
the average entropy gain per moved node falls below a fraction of the
graph's per-node degree entropy.

Two flavors of the decision rule are kept because they genuinely differ:

* ``algorithm1`` - the best transfer must beat the node's leave value, so a
  node transfers only when joining the destination strictly lowers entropy
  relative to arriving as a singleton;
* ``eq7``        - the best transfer must merely beat staying (0).

Statistics (community volume, cut, size) are cached and updated
incrementally on every move; ``validate_stats`` recomputes them from
scratch after each sweep and is meant for tests.
"""

from __future__ import annotations

import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .entropy import (
    CommunityStats,
    _partial_leave,
    _singleton_term,
    community_stats,
    internal_weights,
    node_entropy_baseline,
)
from .graph import Cover, Graph

__all__ = [
    "DetectorConfig",
    "PartitionState",
    "Strategy",
    "SweepLog",
    "init_singletons",
    "best_strategy",
    "apply_transfer",
    "check_termination",
    "detect_nonoverlapping",
]

RULES = ("algorithm1", "eq7")


@dataclass
class DetectorConfig:
    """All detection tunables, with the published defaults."""

    tau_n: float = 0.3
    gamma: float = 1.0
    max_iterations: int = 100
    workers: int = 1
    rule: str = "algorithm1"
    ordering_seed: Optional[int] = None
    validate_stats: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau_n < 1.0:
            raise ValueError(f"tau_n must lie in (0, 1), got {self.tau_n}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class Strategy:
    """One node's chosen action and its heuristic value."""

    action: str                      # "stay" or "transfer"
    target: Optional[int] = None     # community id, transfer only
    delta: float = 0.0               # the winning heuristic value


@dataclass
class SweepLog:
    moved: int
    delta_sum: float
    seconds: float


class PartitionState:
    """Mutable node -> community assignment with cached community statistics."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.assignment = list(range(graph.node_count))
        self.volume: dict[int, float] = {}
        self.cut: dict[int, float] = {}
        self.size: dict[int, int] = {}
        self.iterations = 0
        self.sweeps: list[SweepLog] = []

    # -- queries ------------------------------------------------------------
    def stats(self, cid: int) -> CommunityStats:
        return CommunityStats(self.volume[cid], self.cut[cid], self.size[cid])

    def community_count(self) -> int:
        return len(self.size)

    def communities(self) -> dict[int, list[int]]:
        """Community id -> member list (reconstructed from the assignment)."""
        out: dict[int, list[int]] = {}
        for x, c in enumerate(self.assignment):
            out.setdefault(c, []).append(x)
        return out

    def to_cover(self) -> Cover:
        """Deterministic cover: communities ordered by smallest member id."""
        groups = sorted(self.communities().values(), key=lambda ms: ms[0])
        return Cover(groups)

    # -- verification ---------------------------------------------------------
    def verify_stats(self, tol: float = 0.0) -> None:
        """Compare cached statistics against a from-scratch recomputation.

        ``tol`` is an absolute tolerance (0 demands exact equality, which
        holds for integer weights). Raises AssertionError on mismatch.
        """
        recomputed = {cid: community_stats(self.graph, members)
                      for cid, members in self.communities().items()}
        if set(recomputed) != set(self.size):
            raise AssertionError("cached community ids diverge from assignment")
        for cid, ref in recomputed.items():
            if ref.size != self.size[cid]:
                raise AssertionError(f"community {cid}: size {self.size[cid]} != {ref.size}")
            if abs(ref.volume - self.volume[cid]) > tol:
                raise AssertionError(
                    f"community {cid}: volume {self.volume[cid]!r} != {ref.volume!r}")
            if abs(ref.cut - self.cut[cid]) > tol:
                raise AssertionError(
                    f"community {cid}: cut {self.cut[cid]!r} != {ref.cut!r}")


def init_singletons(graph: Graph) -> PartitionState:
    """One community per node: volume = degree, cut = degree minus loops.

    Directed graphs start with volume = in-strength and cut = out-strength
    (loops excluded from the cut; they never cross a boundary). Zero-degree
    nodes get ordinary singleton entries but are skipped by the sweeps.
    """
    state = PartitionState(graph)
    for x in range(graph.node_count):
        state.volume[x] = graph.vol_deg[x]
        state.cut[x] = graph.cut_deg[x] - graph.loop_weight[x]
        state.size[x] = 1
    return state


def _evaluate(graph: Graph, state: PartitionState, node: int, rule: str):
    """Best response of one node against the current shared state.

    Returns ``(target, delta, internal_src, internal_dst)`` with
    ``target = -1`` for stay. Adjacent communities are scanned in ascending
    id order so equal values resolve to the lowest community id; staying
    wins all ties.

    Under ``algorithm1`` the running maximum starts at the node's leave
    value, and the node's own community - adjacent whenever the node has a
    neighbor (or self-loop) inside - enters the scan like any other with
    its transfer value of 0. Without that zero entry a node whose leave
    value is negative would accept zero-gain lateral hops and churn
    forever. Under ``eq7`` the bar is simply 0.
    """
    assignment = state.assignment
    volume = state.volume
    cut = state.cut
    cx = assignment[node]
    v_lam = graph.total_volume
    d_vol = graph.vol_deg[node]
    d_cut = graph.cut_deg[node]
    loop = graph.loop_weight[node]

    acc, _ = internal_weights(graph, node, assignment)
    own_raw = acc.pop(cx, None)
    own_adjacent = own_raw is not None or loop > 0.0
    own_internal = (0.0 if own_raw is None else own_raw) + loop
    single = _singleton_term(v_lam, d_vol, d_cut - loop)

    src_vol = volume[cx]
    src_guarded = state.size[cx] <= 1 or src_vol - d_vol <= 0.0
    if src_guarded:
        own_partial = 0.0
        d_leave = 0.0
    else:
        own_partial = _partial_leave(
            v_lam, src_vol, cut[cx], src_vol - d_vol,
            cut[cx] + own_internal - d_cut, d_vol)
        d_leave = own_partial + single

    if rule == "algorithm1":
        best = max(d_leave, 0.0) if own_adjacent else d_leave
    else:
        best = 0.0
    target = -1
    target_internal = 0.0
    # unsorted scan with an explicit tie-break on exact equality resolves
    # the same way as an ascending scan with strict improvement
    for c, raw in acc.items():
        dst_vol = volume.get(c)
        dst_cut = cut.get(c)
        if dst_vol is None or dst_cut is None:
            continue  # retired by a concurrent worker; stale candidate
        internal = raw + loop
        if dst_vol <= 0.0:
            d_t = d_leave  # join value is 0 for a volume-free destination
        else:
            join_partial = _partial_leave(
                v_lam, dst_vol + d_vol, dst_cut - internal + d_cut,
                dst_vol, dst_cut, d_vol)
            if src_guarded:
                d_t = -(join_partial + single)
            else:
                d_t = own_partial - join_partial
        if d_t > best or (d_t == best and target >= 0 and c < target):
            best = d_t
            target = c
            target_internal = internal
    return target, best, own_internal, target_internal


def best_strategy(graph: Graph, state: PartitionState, node: int,
                  rule: str = "algorithm1") -> Strategy:
    """Score stay against every adjacent-community transfer for one node."""
    target, best, _, _ = _evaluate(graph, state, node, rule)
    if target < 0:
        return Strategy("stay", None, best)
    return Strategy("transfer", target, best)


def apply_transfer(state: PartitionState, node: int, src: int, dst: int,
                   internal_src: float, internal_dst: float) -> None:
    """Move ``node`` from ``src`` to ``dst`` and update cached statistics.

    Emptied source communities are retired. ``internal_*`` are the
    both-orientation internal weights of the node with respect to each
    community (see :func:`segcom.entropy.internal_weights`).
    """
    if state.assignment[node] != src:
        raise AssertionError(f"node {node} is not in community {src}")
    if src == dst:
        raise AssertionError("transfer within the same community")
    graph = state.graph
    d_vol = graph.vol_deg[node]
    d_cut = graph.cut_deg[node]

    state.assignment[node] = dst
    if state.size[src] == 1:
        del state.volume[src], state.cut[src], state.size[src]
    else:
        state.volume[src] -= d_vol
        state.cut[src] += internal_src - d_cut
        state.size[src] -= 1
    state.volume[dst] += d_vol
    state.cut[dst] += d_cut - internal_dst
    state.size[dst] += 1


def check_termination(moved: int, delta_sum: float, baseline: float,
                      tau_n: float, node_count: int) -> bool:
    """Stop when nothing moved or the mean gain per mover is negligible.

    The reference scale is the graph's per-node degree entropy:
    ``delta_sum / moved <= (tau_n / node_count) * baseline``.
    """
    if moved == 0:
        return True
    return delta_sum / moved <= (tau_n / node_count) * baseline


def _sequential_sweep(graph: Graph, state: PartitionState, nodes: list[int],
                      rule: str,
                      on_move: Optional[Callable[[int, int, int, float], None]]):
    moved = 0
    delta_sum = 0.0
    for x in nodes:
        target, delta, own_internal, target_internal = _evaluate(graph, state, x, rule)
        if target < 0:
            continue
        src = state.assignment[x]
        apply_transfer(state, x, src, target, own_internal, target_internal)
        moved += 1
        delta_sum += delta
        if on_move is not None:
            on_move(x, src, target, delta)
    return moved, delta_sum


def _parallel_sweep(graph: Graph, state: PartitionState, nodes: list[int],
                    rule: str, workers: int, lock: threading.Lock):
    """One sweep with node evaluations spread over worker threads.

    Workers read the shared state without locking; a candidate move is then
    re-evaluated inside the critical section, where the increments are
    recomputed against the now-current assignment before the statistics are
    touched. Results may differ between worker counts, but cached
    statistics always stay exact.
    """

    def run(chunk: list[int]) -> tuple[int, float]:
        moved = 0
        delta_sum = 0.0
        for x in chunk:
            target, _, _, _ = _evaluate(graph, state, x, rule)
            if target < 0:
                continue
            with lock:
                target, delta, own_internal, target_internal = _evaluate(
                    graph, state, x, rule)
                if target < 0:
                    continue
                apply_transfer(state, x, state.assignment[x], target,
                               own_internal, target_internal)
            moved += 1
            delta_sum += delta
        return moved, delta_sum

    # contiguous spans keep each worker close to the sequential visiting
    # order, which keeps parallel partitions close to the sequential one
    span = (len(nodes) + workers - 1) // workers
    chunks = [nodes[i * span:(i + 1) * span] for i in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, chunks))
    return sum(m for m, _ in results), sum(d for _, d in results)


def detect_nonoverlapping(graph: Graph, config: Optional[DetectorConfig] = None,
                          on_move: Optional[Callable[[int, int, int, float], None]] = None
                          ) -> PartitionState:
    """Run the best-response game to a stable non-overlapping partition.

    Nodes are visited in ascending id order, or in a fixed shuffled order
    when ``config.ordering_seed`` is set. With ``workers == 1`` the result
    is fully deterministic for a given config. ``on_move`` (sequential mode
    only) is invoked after every applied transfer with
    ``(node, src, dst, delta)``.
    """
    config = config or DetectorConfig()
    state = init_singletons(graph)
    nodes = [x for x in range(graph.node_count) if not graph.is_isolated(x)]
    if config.ordering_seed is not None:
        random.Random(config.ordering_seed).shuffle(nodes)
    baseline = node_entropy_baseline(graph)
    lock = threading.Lock()

    for _ in range(config.max_iterations):
        started = time.perf_counter()
        if config.workers > 1:
            moved, delta_sum = _parallel_sweep(
                graph, state, nodes, config.rule, config.workers, lock)
        else:
            moved, delta_sum = _sequential_sweep(
                graph, state, nodes, config.rule, on_move)
        state.iterations += 1
        state.sweeps.append(SweepLog(moved, delta_sum, time.perf_counter() - started))
        if config.validate_stats:
            state.verify_stats(tol=0.0 if _integer_weights(graph) else 1e-9)
        if check_termination(moved, delta_sum, baseline, config.tau_n,
                             graph.node_count):
            break
    return state


def _integer_weights(graph: Graph) -> bool:
    return all(w == int(w) for _, _, w in graph.edges())
