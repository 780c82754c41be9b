"""Cover and partition agreement scores: average F1, NMI, and overlapping NMI.

All scores live in [0, 1], use log base 2 where information shows up, and
hit exactly 1 on identical inputs. ``nmi`` is the classic contingency-table
mutual information for disjoint partitions, normalized by the larger of the
two partition entropies. ``onmi`` is the overlapping generalization of
McDaid, Greene and Hurley (the "lack of information" construction), also
max-normalized: community membership is treated as a binary variable per
community, each community is matched against the best valid counterpart,
and unmatched communities pay their full entropy.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from .graph import Cover

__all__ = ["MetricError", "pair_f1", "avg_f1", "nmi", "onmi"]


class MetricError(ValueError):
    """Input outside a metric's domain (empty cover, mismatched node sets...)."""


def _as_sets(cover: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    comms = [frozenset(c) for c in cover]
    if not comms:
        raise MetricError("empty cover")
    if any(not c for c in comms):
        raise MetricError("cover contains an empty community")
    return comms


def pair_f1(a: Iterable[int], b: Iterable[int]) -> float:
    """Harmonic mean of precision and recall between two node sets."""
    sa, sb = set(a), set(b)
    if not sa or not sb:
        raise MetricError("pair_f1 needs two non-empty sets")
    inter = len(sa & sb)
    if inter == 0:
        return 0.0
    precision = inter / len(sa)
    recall = inter / len(sb)
    return 2.0 * precision * recall / (precision + recall)


def avg_f1(detected: Cover | Iterable[Iterable[int]],
           truth: Cover | Iterable[Iterable[int]]) -> float:
    """Symmetric best-match F1 between two covers.

    Mean over detected communities of the best F1 against any truth
    community, averaged with the same quantity in the other direction.
    """
    da = _as_sets(detected)
    tb = _as_sets(truth)
    return 0.5 * (_best_match_mean(da, tb) + _best_match_mean(tb, da))


def _best_match_mean(xs: list[frozenset[int]], ys: list[frozenset[int]]) -> float:
    # node -> communities index over ys; only overlapping pairs can score > 0
    index: dict[int, list[int]] = {}
    for j, y in enumerate(ys):
        for node in y:
            index.setdefault(node, []).append(j)
    total = 0.0
    for x in xs:
        candidates = {j for node in x for j in index.get(node, ())}
        best = 0.0
        for j in candidates:
            score = pair_f1(x, ys[j])
            if score > best:
                best = score
        total += best
    return total / len(xs)


def _plogp(count: int, n: int) -> float:
    if count <= 0:
        return 0.0
    p = count / n
    return -p * math.log2(p)


def nmi(a: Cover | Iterable[Iterable[int]], b: Cover | Iterable[Iterable[int]]) -> float:
    """Normalized mutual information of two disjoint partitions.

    Both inputs must partition the same node set (every node in exactly one
    community); otherwise :class:`MetricError` is raised. Normalization is
    by max(H(a), H(b)); two zero-entropy partitions compare as 1.
    """
    ca = _as_sets(a)
    cb = _as_sets(b)
    label_a = _labels(ca, "first")
    label_b = _labels(cb, "second")
    if set(label_a) != set(label_b):
        raise MetricError("partitions cover different node sets")
    n = len(label_a)
    joint = Counter((label_a[x], label_b[x]) for x in label_a)
    count_a = Counter(label_a.values())
    count_b = Counter(label_b.values())
    h_a = sum(_plogp(c, n) for c in count_a.values())
    h_b = sum(_plogp(c, n) for c in count_b.values())
    denom = max(h_a, h_b)
    if denom == 0.0:
        return 1.0
    mi = 0.0
    for (i, j), nij in joint.items():
        mi += (nij / n) * math.log2(nij * n / (count_a[i] * count_b[j]))
    return mi / denom


def _labels(comms: Sequence[frozenset[int]], which: str) -> dict[int, int]:
    labels: dict[int, int] = {}
    for cid, comm in enumerate(comms):
        for x in comm:
            if x in labels:
                raise MetricError(
                    f"{which} input is not a disjoint partition: node {x} appears "
                    f"in more than one community")
            labels[x] = cid
    return labels


# ------------------------------------------------------------------ onmi ---

def _binary_entropy(size: int, n: int) -> float:
    return _plogp(size, n) + _plogp(n - size, n)


def _conditional(a: frozenset[int], b: frozenset[int], n: int) -> float | None:
    """H(membership of a | membership of b), or None when the pair fails the
    validity constraint h(n11) + h(n00) >= h(n01) + h(n10)."""
    n11 = len(a & b)
    n10 = len(a) - n11
    n01 = len(b) - n11
    n00 = n - n11 - n10 - n01
    if _plogp(n11, n) + _plogp(n00, n) < _plogp(n01, n) + _plogp(n10, n):
        return None
    joint = _plogp(n11, n) + _plogp(n10, n) + _plogp(n01, n) + _plogp(n00, n)
    return joint - _binary_entropy(len(b), n)


def _uninformation(xs: list[frozenset[int]], ys: list[frozenset[int]],
                   n: int) -> tuple[float, float]:
    """(H(X), H(X|Y)) summed over communities; unmatched fall back to H(X_i)."""
    h_x = 0.0
    h_xy = 0.0
    for a in xs:
        h_a = _binary_entropy(len(a), n)
        h_x += h_a
        best = h_a
        for b in ys:
            cond = _conditional(a, b, n)
            if cond is not None and cond < best:
                best = cond
        h_xy += best
    return h_x, h_xy


def onmi(a: Cover | Iterable[Iterable[int]], b: Cover | Iterable[Iterable[int]]) -> float:
    """Overlapping NMI (max-normalized) between two covers.

    The node universe is the union of both covers' nodes; nodes a cover
    does not mention simply belong to none of its communities.
    """
    ca = _as_sets(a)
    cb = _as_sets(b)
    universe: set[int] = set()
    for comm in ca:
        universe |= comm
    for comm in cb:
        universe |= comm
    n = len(universe)
    h_a, h_ab = _uninformation(ca, cb, n)
    h_b, h_ba = _uninformation(cb, ca, n)
    denom = max(h_a, h_b)
    if denom == 0.0:
        return 1.0
    mutual = 0.5 * ((h_a - h_ab) + (h_b - h_ba))
    return mutual / denom
