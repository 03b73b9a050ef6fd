"""Brute-force exact solvers used as ground truth at desk scale.

The cascade rule is recoded here on neighbour bitmasks, deliberately
independent of :mod:`latss.graphs`, so differential tests exercise two
separate implementations of the same process.  Seed sets are enumerated
in increasing size and lexicographically within a size, which makes
every result deterministic.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .graphs import Graph

DEFAULT_LIMIT = 20


def neighbor_masks(graph: Graph) -> list[int]:
    masks = [0] * graph.n
    for u, v in graph.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def cascade(
    masks: Sequence[int],
    thresholds: Sequence[int],
    seed_mask: int,
    latency: int,
) -> int:
    """Bitmask of vertices active after ``latency`` rounds."""
    n = len(masks)
    active = seed_mask
    for _ in range(latency):
        add = 0
        for v in range(n):
            bit = 1 << v
            if active & bit:
                continue
            if (masks[v] & active).bit_count() >= thresholds[v]:
                add |= bit
        if not add:
            break
        active |= add
    return active


def _guard(graph: Graph, limit: int) -> None:
    if graph.n > limit:
        raise ValueError(
            f"instance has {graph.n} vertices; brute force is capped at {limit}"
        )


def _mask(vertices: Iterable[int], n: int) -> int:
    mask = 0
    for v in vertices:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range for n={n}")
        mask |= 1 << v
    return mask


def brute_min_target(
    graph: Graph,
    thresholds: Sequence[int],
    latency: int,
    targets: Iterable[int],
    *,
    limit: int = DEFAULT_LIMIT,
) -> frozenset[int]:
    """Smallest seed set activating every target within the latency bound.

    Returns the lexicographically smallest optimum.  Always succeeds:
    seeding all vertices is feasible.
    """
    _guard(graph, limit)
    n = graph.n
    tmask = _mask(targets, n)
    masks = neighbor_masks(graph)
    for size in range(n + 1):
        for comb in combinations(range(n), size):
            seed = 0
            for v in comb:
                seed |= 1 << v
            if cascade(masks, thresholds, seed, latency) & tmask == tmask:
                return frozenset(comb)
    raise AssertionError("unreachable: seeding all vertices is feasible")


def brute_decision(
    graph: Graph,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    requirement: int,
    *,
    limit: int = DEFAULT_LIMIT,
) -> tuple[bool, frozenset[int] | None]:
    """Can ``requirement`` vertices be activated with at most ``budget`` seeds?

    Returns the decision with a witness seed set (smallest, then
    lexicographic) or ``None``.
    """
    _guard(graph, limit)
    n = graph.n
    masks = neighbor_masks(graph)
    for size in range(min(budget, n) + 1):
        for comb in combinations(range(n), size):
            seed = 0
            for v in comb:
                seed |= 1 << v
            if cascade(masks, thresholds, seed, latency).bit_count() >= requirement:
                return True, frozenset(comb)
    return False, None


def brute_select_targets(
    graph: Graph,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    targets: Iterable[int],
    *,
    limit: int = DEFAULT_LIMIT,
) -> frozenset[int] | None:
    """Minimum seed set activating all targets, or ``None`` if it exceeds budget."""
    _guard(graph, limit)
    n = graph.n
    tmask = _mask(targets, n)
    masks = neighbor_masks(graph)
    for size in range(min(budget, n) + 1):
        for comb in combinations(range(n), size):
            seed = 0
            for v in comb:
                seed |= 1 << v
            if cascade(masks, thresholds, seed, latency) & tmask == tmask:
                return frozenset(comb)
    return None
