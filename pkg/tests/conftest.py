"""Shared fixtures: literal-definition oracle and random corpora.

The oracle here recomputes everything straight from edge lists (volumes,
cuts, per-community entropy terms) so the package's cached-statistics and
closed-form paths are checked against an independent route.
"""

import math
import random

import pytest

from segcom import Graph
from segcom.synth import random_graph


# ------------------------------------------------------------- the oracle ---

def oracle_degrees(graph: Graph):
    """(volume degree, cut degree, loop weight) per node, from the edge list."""
    n = graph.node_count
    vol = [0.0] * n
    cut = [0.0] * n
    loop = [0.0] * n
    for u, v, w in graph.edges():
        if graph.directed:
            cut[u] += w
            vol[v] += w
            if u == v:
                loop[u] += w
        elif u == v:
            vol[u] += w
            cut[u] += w
            loop[u] += w
        else:
            vol[u] += w
            vol[v] += w
            cut[u] += w
            cut[v] += w
    return vol, cut, loop


def oracle_community(graph: Graph, members) -> tuple[float, float]:
    """(volume, cut) of one community, recounted edge by edge."""
    mset = set(members)
    vol_deg, _, _ = oracle_degrees(graph)
    volume = sum(vol_deg[x] for x in mset)
    cut = 0.0
    for u, v, w in graph.edges():
        if u == v:
            continue
        if graph.directed:
            if u in mset and v not in mset:
                cut += w
        elif (u in mset) != (v in mset):
            cut += w
    return volume, cut


def oracle_entropy(graph: Graph, cover) -> float:
    """Literal two-level entropy of a cover, log base 2.

    Per-community terms as written; every extra membership of a node
    additionally carries the entropy term of a standalone copy (the
    convention the overlap heuristic is defined by). Undefined (raises)
    when a community has zero volume but a positive cut.
    """
    vol_deg, cut_deg, loop = oracle_degrees(graph)
    v_lam = sum(vol_deg)
    if v_lam <= 0:
        return 0.0
    total = 0.0
    multiplicity: dict[int, int] = {}
    for members in cover:
        volume, cut = oracle_community(graph, members)
        for x in members:
            multiplicity[x] = multiplicity.get(x, 0) + 1
        if volume <= 0:
            if cut > 0:
                raise ValueError("zero-volume community with positive cut")
            continue
        total += (cut / v_lam) * math.log2(volume / v_lam)
        for x in members:
            if vol_deg[x] > 0:
                total += (vol_deg[x] / v_lam) * math.log2(vol_deg[x] / volume)
    h2 = -total
    for x, count in multiplicity.items():
        if count > 1:
            ext = cut_deg[x] - loop[x]
            d = vol_deg[x]
            if ext > 0 and d > 0:
                h2 += (count - 1) * (ext / v_lam) * math.log2(d / v_lam)
            elif ext > 0:
                raise ValueError("replicated zero-volume node")
    return h2


def oracle_defined(graph: Graph, cover) -> bool:
    try:
        oracle_entropy(graph, cover)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------- corpora ---

def random_partition(rng: random.Random, n: int, max_parts: int | None = None):
    k = rng.randint(1, max_parts or n)
    assign = [rng.randrange(k) for _ in range(n)]
    comms: dict[int, set[int]] = {}
    for x, c in enumerate(assign):
        comms.setdefault(c, set()).add(x)
    return list(comms.values())


def mixed_graph_corpus(count: int, seed: int = 0, max_nodes: int = 50,
                       max_edges: int = 200, loops: bool = False):
    """Small random graphs cycling through directed/weighted combinations."""
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(4, max_nodes)
        m = rng.randint(n - 1, min(max_edges, n * (n - 1) // 2))
        yield random_graph(n, m, seed=seed * 100003 + i,
                           directed=i % 2 == 1, weighted=i % 4 >= 2,
                           loops=loops and i % 3 == 0)


# ----------------------------------------------------------- tiny fixtures ---

def triangle_pair() -> Graph:
    """Two disjoint triangles, nodes 0-2 and 3-5."""
    return Graph.from_edges([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                             (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)])


def four_cycle() -> Graph:
    return Graph.from_edges([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])


def barbell() -> Graph:
    """Two 4-cliques joined by the single edge (3, 4)."""
    edges = []
    for base in (0, 4):
        for i in range(4):
            for j in range(i + 1, 4):
                edges.append((base + i, base + j, 1.0))
    edges.append((3, 4, 1.0))
    return Graph.from_edges(edges)


@pytest.fixture
def triangles() -> Graph:
    return triangle_pair()
