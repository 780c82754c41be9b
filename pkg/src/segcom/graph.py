"""Graph construction and text I/O for edge lists and community files.

Edge lists are one edge per line, ``u v`` or ``u v w``, whitespace separated,
with ``#`` comment lines (the layout SNAP datasets use). Node labels are
remapped to dense integer ids at parse time; the original labels are kept so
output files speak the caller's vocabulary again.

Conventions baked in here and relied on by the rest of the package:

* duplicate edge lines merge by summing their weights;
* "degree" of a weighted node means strength (sum of incident weights);
* a self-loop contributes its weight once to the node's degree and is
  treated as internal to whatever community the node is in;
* directed graphs track in-strength and out-strength separately; the
  in-strength is the node's contribution to community volumes and the
  out-strength its contribution to community cuts;
* zero-degree nodes are kept (they stay singleton communities downstream).
"""

from __future__ import annotations

import logging
from typing import IO, Iterable, Sequence

log = logging.getLogger(__name__)

__all__ = [
    "Graph",
    "Cover",
    "EdgeListParseError",
    "GraphValidationError",
    "parse_edge_list",
    "load_cover",
    "write_cover",
]


class EdgeListParseError(ValueError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class GraphValidationError(ValueError):
    """Structurally well-formed input that violates a graph invariant."""


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, str):
        return source.splitlines()
    return source


class Graph:
    """Immutable weighted graph with dense integer node ids.

    Adjacency is stored as per-node lists of ``(neighbor, weight)`` tuples.
    For undirected graphs each edge appears in both endpoint lists and a
    self-loop appears once. For directed graphs separate out- and
    in-adjacency views are kept.

    After construction the object is never mutated, so it is safe to read
    from any number of worker threads.
    """

    __slots__ = (
        "directed",
        "node_count",
        "labels",
        "label_index",
        "adj",
        "in_adj",
        "vol_deg",
        "cut_deg",
        "loop_weight",
        "total_volume",
        "edge_count",
        "total_edge_weight",
    )

    def __init__(self, directed: bool, labels: Sequence[str],
                 edges: dict[tuple[int, int], float]):
        n = len(labels)
        self.directed = directed
        self.node_count = n
        self.labels = list(labels)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}

        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        in_adj: list[list[tuple[int, float]]] = [[] for _ in range(n)] if directed else adj
        vol = [0.0] * n
        cut = [0.0] * n
        loop = [0.0] * n
        total_w = 0.0
        for (u, v), w in edges.items():
            total_w += w
            if directed:
                adj[u].append((v, w))
                in_adj[v].append((u, w))
                cut[u] += w
                vol[v] += w
                if u == v:
                    loop[u] += w
            else:
                adj[u].append((v, w))
                if u != v:
                    adj[v].append((u, w))
                    vol[v] += w
                    cut[v] += w
                else:
                    loop[u] += w
                vol[u] += w
                cut[u] += w

        self.adj = adj
        self.in_adj = in_adj
        self.vol_deg = vol
        self.cut_deg = cut
        self.loop_weight = loop
        self.total_volume = sum(vol)
        self.edge_count = len(edges)
        self.total_edge_weight = total_w

    # -- construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int, float]], *,
                   directed: bool = False, node_count: int | None = None) -> "Graph":
        """Build a graph from ``(u, v, w)`` triples over integer ids 0..n-1.

        Duplicate pairs merge by weight summation, and for undirected graphs
        ``(u, v)`` and ``(v, u)`` are the same edge.
        """
        merged: dict[tuple[int, int], float] = {}
        max_id = -1
        for u, v, w in edges:
            if w <= 0:
                raise GraphValidationError(f"edge ({u}, {v}) has non-positive weight {w}")
            if u > max_id:
                max_id = u
            if v > max_id:
                max_id = v
            key = (u, v) if directed or u <= v else (v, u)
            merged[key] = merged.get(key, 0.0) + w
        n = max(max_id + 1, node_count or 0)
        return cls(directed, [str(i) for i in range(n)], merged)

    # -- queries -----------------------------------------------------------
    def is_isolated(self, node: int) -> bool:
        """True when the node has no incident edge in either direction."""
        if self.directed:
            return not self.adj[node] and not self.in_adj[node]
        return not self.adj[node]

    def edges(self) -> Iterable[tuple[int, int, float]]:
        """Yield each edge once as ``(u, v, w)`` (canonical u <= v when undirected)."""
        for u in range(self.node_count):
            for v, w in self.adj[u]:
                if self.directed or u <= v:
                    yield u, v, w

    def neighbors(self, node: int) -> set[int]:
        """Ids adjacent to ``node`` through any edge orientation."""
        out = {v for v, _ in self.adj[node]}
        if self.directed:
            out.update(v for v, _ in self.in_adj[node])
        return out


def parse_edge_list(source, *, directed: bool = False, weighted: bool = False) -> Graph:
    """Parse an edge-list text (string or line iterable) into a :class:`Graph`.

    Raises :class:`EdgeListParseError` for malformed lines and
    :class:`GraphValidationError` for non-positive weights or a weight column
    showing up when ``weighted=False``.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    merged: dict[tuple[int, int], float] = {}

    def intern(label: str) -> int:
        i = index.get(label)
        if i is None:
            i = len(labels)
            index[label] = i
            labels.append(label)
        return i

    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 2:
            u_lab, v_lab = parts
            w = 1.0
        elif len(parts) == 3:
            if not weighted:
                raise GraphValidationError(
                    f"line {line_no}: weight column present but the graph was "
                    f"declared unweighted")
            u_lab, v_lab, w_str = parts
            try:
                w = float(w_str)
            except ValueError:
                raise EdgeListParseError(line_no, f"bad weight {w_str!r}") from None
        else:
            raise EdgeListParseError(
                line_no, f"expected 'u v' or 'u v w', got {len(parts)} fields")
        if w < 0:
            raise GraphValidationError(f"line {line_no}: negative weight {w}")
        if w == 0:
            raise GraphValidationError(f"line {line_no}: zero-weight edge")
        u = intern(u_lab)
        v = intern(v_lab)
        key = (u, v) if directed or u <= v else (v, u)
        merged[key] = merged.get(key, 0.0) + w

    return Graph(directed, labels, merged)


class Cover:
    """A set of communities; a node may belong to none, one, or several."""

    __slots__ = ("communities", "dropped_labels")

    def __init__(self, communities: Iterable[Iterable[int]], dropped_labels: int = 0):
        comms = []
        for comm in communities:
            members = frozenset(comm)
            if not members:
                raise GraphValidationError("empty community in cover")
            comms.append(members)
        self.communities = comms
        self.dropped_labels = dropped_labels

    def __len__(self) -> int:
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cover):
            return NotImplemented
        return sorted(map(sorted, self.communities)) == sorted(map(sorted, other.communities))

    def __hash__(self):
        return hash(frozenset(self.communities))

    def nodes(self) -> set[int]:
        out: set[int] = set()
        for comm in self.communities:
            out |= comm
        return out

    def membership_lists(self, node_count: int | None = None) -> dict[int, list[int]]:
        """Node id -> sorted list of community indices containing it."""
        out: dict[int, list[int]] = {}
        for cid, comm in enumerate(self.communities):
            for x in comm:
                out.setdefault(x, []).append(cid)
        if node_count is not None:
            for x in range(node_count):
                out.setdefault(x, [])
        return out

    def is_partition(self) -> bool:
        """True when no node appears in more than one community."""
        seen: set[int] = set()
        for comm in self.communities:
            for x in comm:
                if x in seen:
                    return False
                seen.add(x)
        return True


def load_cover(source, label_index: dict[str, int]) -> Cover:
    """Read a community file: one community per line, whitespace-separated labels.

    Labels missing from ``label_index`` are dropped; the count of dropped
    labels is recorded on the returned cover and logged. Lines left with no
    mappable member are skipped entirely.
    """
    comms: list[set[int]] = []
    dropped = 0
    for raw in _iter_lines(source):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        members: set[int] = set()
        for lab in line.split():
            i = label_index.get(lab)
            if i is None:
                dropped += 1
            else:
                members.add(i)
        if members:
            comms.append(members)
    if dropped:
        log.warning("dropped %d community-file labels not present in the graph", dropped)
    return Cover(comms, dropped_labels=dropped)


def write_cover(cover: Cover, labels: Sequence[str], stream: IO[str]) -> None:
    """Write one community per line using original labels.

    Communities appear in cover order; members within a line are sorted by
    dense node id, so output is deterministic.
    """
    for comm in cover.communities:
        stream.write(" ".join(labels[x] for x in sorted(comm)))
        stream.write("\n")
