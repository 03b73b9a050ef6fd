"""Shared hypothesis strategies and seeded corpus builders for the tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from latss.graphs import Graph, random_tree
from latss.kexpr import (
    Eta,
    Leaf,
    PartialRedundancyError,
    Rho,
    Union,
    canonicalize_names,
    normalize_irredundant,
)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if possible:
        edges = draw(
            st.lists(st.sampled_from(possible), unique=True, max_size=len(possible))
        )
    else:
        edges = []
    return Graph(n, edges)


@st.composite
def cascade_instances(draw, max_n: int = 8):
    """Graph, thresholds (possibly above degree+1), seed set, latency."""
    g = draw(graphs(max_n=max_n))
    thresholds = tuple(
        draw(st.integers(0, g.degree(v) + 2)) for v in range(g.n)
    )
    seed = draw(st.sets(st.integers(0, g.n - 1), max_size=g.n))
    latency = draw(st.integers(0, g.n + 2))
    return g, thresholds, seed, latency


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 10):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree(n, random.Random(seed))


def expressions(max_labels: int = 3, max_leaves: int = 10):
    """Random well-formed expression trees with unique leaf names."""
    labels = st.integers(1, max_labels)
    leaf = st.builds(Leaf, labels, st.just("x"))

    def extend(children):
        return st.one_of(
            st.builds(Union, children, children),
            st.builds(Eta, labels, labels, children).filter(
                lambda e: e.a != e.b
            ),
            st.builds(Rho, labels, labels, children).filter(
                lambda e: e.a != e.b
            ),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves).map(
        canonicalize_names
    )


def random_expression(rng: random.Random, max_vertices: int = 6, k: int = 3):
    """Seeded random irredundant expression with at most ``max_vertices`` leaves."""
    while True:
        n = rng.randint(1, max_vertices)
        items = [Leaf(rng.randint(1, k), str(i)) for i in range(n)]
        while len(items) > 1:
            first = items.pop(rng.randrange(len(items)))
            second = items.pop(rng.randrange(len(items)))
            merged = Union(first, second)
            for _ in range(rng.randint(0, 3)):
                a, b = rng.randint(1, k), rng.randint(1, k)
                if a == b:
                    continue
                if rng.random() < 0.6:
                    merged = Eta(a, b, merged)
                else:
                    merged = Rho(a, b, merged)
            items.append(merged)
        expr = items[0]
        for _ in range(rng.randint(0, 2)):
            a, b = rng.randint(1, k), rng.randint(1, k)
            if a != b:
                expr = Rho(a, b, expr)
        try:
            return normalize_irredundant(expr)
        except PartialRedundancyError:
            continue


def tree_corpus(
    count: int,
    seed: int,
    n_lo: int = 2,
    n_hi: int = 12,
):
    """Random trees with thresholds in [1, degree], random targets, random latency."""
    rng = random.Random(seed)
    corpus = []
    for _ in range(count):
        n = rng.randint(n_lo, n_hi)
        graph = random_tree(n, rng)
        thresholds = tuple(
            rng.randint(1, graph.degree(v)) for v in range(n)
        )
        targets = frozenset(v for v in range(n) if rng.random() < 0.5)
        latency = rng.randint(1, n)
        corpus.append((graph, thresholds, latency, targets))
    return corpus
