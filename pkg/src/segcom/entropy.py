"""Two-level structural entropy and the constant-time move heuristics.

For a partition P of a graph with total volume ``v``, community volumes
``v_c`` (sum of member degrees; in-strengths when directed) and community
cuts ``g_c`` (boundary weight; out-cut when directed), the two-level
structural entropy in bits is

    H2(P) = - sum_c [ (g_c/v) log2(v_c/v) + sum_{x in c} (d_x/v) log2(d_x/v_c) ].

Everything the detection game needs is the change of H2 under single-node
moves, and that change only involves the statistics of the touched
communities:

    leave     node x leaves community C and becomes a singleton;
    transfer  leave from the source followed by the inverse of a leave
              into the destination;
    overlap   x is copied into an adjacent community, original membership
              and all global quantities (v, d_x) unchanged.

The leave value is computed in O(1) from (v_c, g_c, d_x) plus the weight of
edges between x and the community, which costs one pass over x's neighbors
to collect for every adjacent community at once.

``internal_weight`` arguments throughout mean the *both-orientation* edge
weight between the node and the community's other members, with self-loops
counted once: for undirected graphs this is twice the ordinary one-way
internal strength (plus the loop weight), for directed graphs it is the sum
of the in- and out-orientation internal strengths (plus the loop weight).
Under that convention one set of update formulas serves both cases:

    leave:  v' = v - d_vol,  g' = g + internal_weight - d_cut
    join:   v' = v + d_vol,  g' = g - internal_weight + d_cut

where d_vol is the node's volume contribution and d_cut its cut
contribution (both equal the strength for undirected graphs; in-strength
and out-strength respectively for directed ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph

__all__ = [
    "CommunityStats",
    "EntropyDomainError",
    "entropy_2d",
    "node_entropy_baseline",
    "community_stats",
    "leave_stats",
    "join_stats",
    "delta_leave",
    "delta_leave_after_join",
    "delta_transfer",
    "delta_overlap",
    "internal_weights",
]

_log2 = math.log2


class EntropyDomainError(ValueError):
    """A community with zero volume but positive cut has no finite entropy."""


@dataclass
class CommunityStats:
    """Cached statistics of one community."""

    volume: float
    cut: float
    size: int


# --------------------------------------------------------------- oracle ---

def community_stats(graph: Graph, members: Iterable[int]) -> CommunityStats:
    """Recompute (volume, cut, size) of a community from scratch.

    Self-loops never cross the boundary. For directed graphs the cut counts
    out-edges leaving the community.
    """
    mset = set(members)
    vol = 0.0
    cut = 0.0
    vd = graph.vol_deg
    for x in mset:
        vol += vd[x]
        for y, w in graph.adj[x]:
            if y == x:
                continue
            if y not in mset:
                cut += w
    return CommunityStats(vol, cut, len(mset))


def entropy_2d(graph: Graph, cover: Iterable[Iterable[int]]) -> float:
    """Two-level structural entropy of a community cover, in bits.

    On disjoint partitions this is the literal per-community sum above. For
    overlapping covers every extra membership of a node additionally
    carries the entropy term of a standalone copy of that node,

        (ext_x / v) * log2(d_x / v),   ext_x = external cut of {x},

    which makes copying a node into a community score exactly like the
    inverse of a leave move - the convention the overlap heuristic is
    defined by. On disjoint input the correction is empty and the value is
    plain structural entropy.

    Zero-degree terms are skipped; a community of only zero-degree nodes
    contributes nothing, while zero volume combined with a positive cut
    raises :class:`EntropyDomainError`.
    """
    v_lam = graph.total_volume
    if v_lam <= 0:
        return 0.0
    vd = graph.vol_deg
    total = 0.0
    multiplicity: dict[int, int] = {}
    for members in cover:
        stats = community_stats(graph, members)
        for x in members:
            multiplicity[x] = multiplicity.get(x, 0) + 1
        if stats.volume <= 0.0:
            if stats.cut > 0.0:
                raise EntropyDomainError(
                    "community with zero volume but cut %g" % stats.cut)
            continue
        total += (stats.cut / v_lam) * _log2(stats.volume / v_lam)
        for x in members:
            d = vd[x]
            if d > 0:
                total += (d / v_lam) * _log2(d / stats.volume)
    h2 = -total
    for x, count in multiplicity.items():
        if count > 1:
            ext = graph.cut_deg[x] - graph.loop_weight[x]
            if ext > 0.0 and vd[x] <= 0.0:
                raise EntropyDomainError(
                    f"replicated node {x} has zero volume but positive cut")
            h2 += (count - 1) * _singleton_term(v_lam, vd[x], ext)
    return h2


def node_entropy_baseline(graph: Graph) -> float:
    """Entropy of the degree distribution: sum_x -(d_x/v) log2(d_x/v).

    This is the all-singletons structural entropy and the reference scale
    of the game's termination rule. Empty graphs score 0.
    """
    v_lam = graph.total_volume
    if v_lam <= 0:
        return 0.0
    total = 0.0
    for d in graph.vol_deg:
        if d > 0:
            total -= (d / v_lam) * _log2(d / v_lam)
    return total


# ------------------------------------------------------ incremental stats ---

def leave_stats(volume: float, cut: float, d_vol: float, d_cut: float,
                internal_weight: float) -> tuple[float, float]:
    """(v', g') of a community after one member leaves."""
    return volume - d_vol, cut + internal_weight - d_cut


def join_stats(volume: float, cut: float, d_vol: float, d_cut: float,
               internal_weight: float) -> tuple[float, float]:
    """(v', g') of a community after an outside node joins; inverse of leave."""
    return volume + d_vol, cut - internal_weight + d_cut


# ------------------------------------------------------------ move deltas ---
#
# A leave value splits into two pieces:
#
#   partial(x, C) = (g'/v) log2(v'/v) - (g_c/v) log2(v_c/v)
#                   - (d_vol/v) log2(d_vol/v_c) + (v'/v) log2(v_c/v')
#   single(x)     = (ext_x/v) log2(d_vol/v),   ext_x = d_cut - loops
#
# with Delta_L = partial + single. ``single`` is the entropy term of the
# singleton community the departing node founds; its coefficient is the
# node's external cut, which equals d_vol only for loop-free undirected
# graphs. A transfer is a leave followed by the inverse of a leave, so the
# two ``single`` terms cancel and the difference of partials is the exact
# entropy change of the move - also when d_vol = 0 would make each side's
# ``single`` infinite on its own.


def _partial_leave(v_lam: float, v_cur: float, g_cur: float,
                   v_new: float, g_new: float, d_vol: float) -> float:
    """Leave value without the departing node's singleton term.

    Caller guarantees v_cur > 0 and v_new > 0.
    """
    value = ((g_new / v_lam) * _log2(v_new / v_lam)
             - (g_cur / v_lam) * _log2(v_cur / v_lam)
             + (v_new / v_lam) * _log2(v_cur / v_new))
    if d_vol > 0.0:
        value -= (d_vol / v_lam) * _log2(d_vol / v_cur)
    return value


def _singleton_term(v_lam: float, d_vol: float, ext_cut: float) -> float:
    """Entropy term of a one-node community with the given degrees.

    Zero-volume nodes get 0 by convention: their standalone term has no
    finite value and it cancels out of every transfer anyway.
    """
    if ext_cut <= 0.0 or d_vol <= 0.0:
        return 0.0
    return (ext_cut / v_lam) * _log2(d_vol / v_lam)


def delta_leave(v_lam: float, stats: CommunityStats, d_vol: float,
                d_cut: float, internal_weight: float, loop: float = 0.0) -> float:
    """Entropy change (bits saved) when a member leaves ``stats``'s community.

    Exactly 0 for a singleton community, and 0 by convention when the
    remaining members carry no volume (the formula has no finite value
    there). ``loop`` is the node's self-loop weight; loops stay internal,
    so they are excluded from the cut of the singleton the node founds.
    """
    if stats.size <= 1:
        return 0.0
    v_new = stats.volume - d_vol
    if v_new <= 0.0:
        return 0.0
    g_new = stats.cut + internal_weight - d_cut
    return (_partial_leave(v_lam, stats.volume, stats.cut, v_new, g_new, d_vol)
            + _singleton_term(v_lam, d_vol, d_cut - loop))


def delta_leave_after_join(v_lam: float, stats: CommunityStats, d_vol: float,
                           d_cut: float, internal_weight: float,
                           loop: float = 0.0) -> float:
    """Leave value of a node evaluated against a community it is *not* in.

    The community statistics are first augmented as if the node had joined,
    then the leave formula is applied, so this is the exact negation of the
    entropy change of joining. Communities whose current volume is zero get
    the singleton convention (0).
    """
    if stats.volume <= 0.0:
        return 0.0
    v_joined = stats.volume + d_vol
    g_joined = stats.cut - internal_weight + d_cut
    return (_partial_leave(v_lam, v_joined, g_joined, stats.volume, stats.cut, d_vol)
            + _singleton_term(v_lam, d_vol, d_cut - loop))


def delta_transfer(v_lam: float, src: CommunityStats, dst: CommunityStats,
                   d_vol: float, d_cut: float, internal_src: float,
                   internal_dst: float, loop: float = 0.0,
                   same_community: bool = False) -> float:
    """Entropy change of moving a node from ``src`` to ``dst``.

    Composite of a leave from the source and the inverse of a leave into
    the destination; the intermediate singleton cancels exactly whenever
    both sides are in the formula's domain. Transfers to the node's own
    community are 0.
    """
    if same_community:
        return 0.0
    src_guarded = src.size <= 1 or src.volume - d_vol <= 0.0
    dst_guarded = dst.volume <= 0.0
    if src_guarded or dst_guarded:
        return (delta_leave(v_lam, src, d_vol, d_cut, internal_src, loop)
                - delta_leave_after_join(v_lam, dst, d_vol, d_cut, internal_dst, loop))
    v_new = src.volume - d_vol
    g_new = src.cut + internal_src - d_cut
    v_joined = dst.volume + d_vol
    g_joined = dst.cut - internal_dst + d_cut
    return (_partial_leave(v_lam, src.volume, src.cut, v_new, g_new, d_vol)
            - _partial_leave(v_lam, v_joined, g_joined, dst.volume, dst.cut, d_vol))


def delta_overlap(v_lam: float, dst: CommunityStats, d_vol: float,
                  d_cut: float, internal_dst: float, loop: float = 0.0) -> float:
    """Entropy change of copying a node into ``dst``.

    The copy leaves the node's original community and every global quantity
    untouched, so the value is just the negated leave from the augmented
    destination.
    """
    return -delta_leave_after_join(v_lam, dst, d_vol, d_cut, internal_dst, loop)


# ------------------------------------------------------------ bookkeeping ---

def internal_weights(graph: Graph, node: int, assignment) -> tuple[dict[int, float], float]:
    """Both-orientation edge weight between ``node`` and each adjacent community.

    One pass over the node's neighbors; ``assignment`` maps node id ->
    community id. Returns ``(weights, loop)`` where ``weights[c]`` excludes
    the node's self-loop weight ``loop``; the loop is internal to whichever
    community the node is (or would be) in, so callers add ``loop`` to the
    entry of every community they evaluate.
    """
    acc: dict[int, float] = {}
    if graph.directed:
        for y, w in graph.adj[node]:
            if y != node:
                c = assignment[y]
                acc[c] = acc.get(c, 0.0) + w
        for y, w in graph.in_adj[node]:
            if y != node:
                c = assignment[y]
                acc[c] = acc.get(c, 0.0) + w
    else:
        for y, w in graph.adj[node]:
            if y != node:
                c = assignment[y]
                acc[c] = acc.get(c, 0.0) + 2.0 * w
    return acc, graph.loop_weight[node]
