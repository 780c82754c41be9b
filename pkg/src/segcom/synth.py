"""Synthetic graphs with known structure, for tests, demos, and benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import Cover, Graph

__all__ = ["planted_partition", "random_graph", "edge_list_text"]


def _sample_distinct(rng: np.random.Generator, limit: int, count: int) -> np.ndarray:
    """``count`` distinct integers from [0, limit); cheap for count << limit."""
    if count <= 0:
        return np.empty(0, dtype=np.int64)
    picked = np.unique(rng.integers(0, limit, size=count))
    while picked.size < count:
        extra = rng.integers(0, limit, size=count - picked.size + 8)
        picked = np.unique(np.concatenate([picked, extra]))
    if picked.size > count:
        picked = rng.permutation(picked)[:count]
    return picked


def planted_partition(blocks: int, block_size: int, p_in: float, p_out: float,
                      seed: int, weighted: bool = False) -> tuple[Graph, Cover]:
    """Undirected planted-partition graph plus its ground-truth blocks.

    Each within-block pair is an edge with probability ``p_in`` and each
    cross-block pair with probability ``p_out``; edge counts are drawn first
    and pairs sampled uniformly, which is equivalent and stays fast when the
    number of pairs is huge. Weighted graphs get uniform weights in
    [0.5, 1.5).
    """
    rng = np.random.default_rng(seed)
    n = blocks * block_size
    edges: list[tuple[int, int, float]] = []

    # within-block pairs, indexed (block, i < j)
    pairs_per_block = block_size * (block_size - 1) // 2
    k_in = rng.binomial(blocks * pairs_per_block, p_in)
    for flat in _sample_distinct(rng, blocks * pairs_per_block, int(k_in)):
        b, p = divmod(int(flat), pairs_per_block)
        i, j = _pair_from_index(p, block_size)
        edges.append((b * block_size + i, b * block_size + j, 1.0))

    # cross-block pairs: rejection-sample uniform node pairs
    total_pairs = n * (n - 1) // 2
    cross_pairs = total_pairs - blocks * pairs_per_block
    k_out = int(rng.binomial(cross_pairs, p_out))
    seen: set[tuple[int, int]] = set()
    while len(seen) < k_out:
        need = k_out - len(seen)
        us = rng.integers(0, n, size=2 * need + 8)
        vs = rng.integers(0, n, size=2 * need + 8)
        for u, v in zip(us, vs):
            if len(seen) >= k_out:
                break
            u, v = int(u), int(v)
            if u == v or u // block_size == v // block_size:
                continue
            key = (u, v) if u < v else (v, u)
            seen.add(key)
    edges.extend((u, v, 1.0) for u, v in seen)

    if weighted:
        weights = rng.uniform(0.5, 1.5, size=len(edges))
        edges = [(u, v, float(w)) for (u, v, _), w in zip(edges, weights)]

    graph = Graph.from_edges(edges, directed=False, node_count=n)
    truth = Cover([range(b * block_size, (b + 1) * block_size) for b in range(blocks)])
    return graph, truth


def _pair_from_index(index: int, size: int) -> tuple[int, int]:
    """Inverse of the row-major enumeration of pairs i < j over range(size)."""
    i = 0
    remaining = index
    row = size - 1
    while remaining >= row:
        remaining -= row
        row -= 1
        i += 1
    return i, i + 1 + remaining


def random_graph(n: int, edges: int, seed: int, *, directed: bool = False,
                 weighted: bool = False, loops: bool = False) -> Graph:
    """Uniform random multigraph-free graph with ``edges`` distinct pairs."""
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    attempts = 0
    while len(chosen) < edges and attempts < 50 * edges + 100:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        attempts += 1
        if u == v and not loops:
            continue
        key = (u, v) if directed or u <= v else (v, u)
        chosen.add(key)
    triples = []
    for u, v in sorted(chosen):
        w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
        triples.append((u, v, w))
    return Graph.from_edges(triples, directed=directed, node_count=n)


def edge_list_text(graph: Graph, weighted: bool = False) -> str:
    """Render a graph back into edge-list text the parser accepts."""
    lines = []
    for u, v, w in graph.edges():
        if weighted:
            lines.append(f"{graph.labels[u]} {graph.labels[v]} {w!r}")
        else:
            lines.append(f"{graph.labels[u]} {graph.labels[v]}")
    return "\n".join(lines) + ("\n" if lines else "")
