"""Shared graph generators for randomized tests.

All generators take a ``random.Random`` so every test controls its seed;
the suites stay reproducible without hypothesis' database.
"""

from __future__ import annotations

import random
from fractions import Fraction

from admissible import (
    DocumentModel,
    Fiber,
    FibrationData,
    MetrizedGraph,
    build_graph,
    divisor_class,
)

LENGTH_POOL = (Fraction(1, 2), Fraction(1), Fraction(2))


def random_tree(
    rng: random.Random,
    max_edges: int = 10,
    lengths: tuple[Fraction, ...] = LENGTH_POOL,
) -> MetrizedGraph:
    """A random tree with 0..max_edges edges and genus-0 vertices."""
    n = rng.randint(1, max_edges + 1)
    vertices = [(f"v{i}", 0) for i in range(n)]
    edges = [
        (f"v{rng.randrange(i)}", f"v{i}", rng.choice(lengths)) for i in range(1, n)
    ]
    return build_graph(vertices, edges)


def random_weighting(
    rng: random.Random, graph: MetrizedGraph, max_weight: int = 5
) -> dict[str, int]:
    """Random alpha with entries in 0..max_weight and positive total."""
    while True:
        alpha = {v: rng.randint(0, max_weight) for v in graph.vertices}
        if sum(alpha.values()) > 0:
            return alpha


def random_stable_fiber(
    rng: random.Random,
    max_tree_edges: int = 5,
    max_genus: int = 10,
    lengths: tuple[Fraction, ...] = (Fraction(1),),
    max_edges: int | None = None,
) -> MetrizedGraph:
    """A random tree of stable components that is a valid semistable dual
    graph: total genus in [2, max_genus] and both sides of every bridge of
    positive genus (so no node of type 0 sits on a bridge)."""
    while True:
        n = rng.randint(1, max_tree_edges + 1)
        vertices = [(f"v{i}", rng.randint(0, 3)) for i in range(n)]
        edges = [
            (f"v{rng.randrange(i)}", f"v{i}", rng.choice(lengths))
            for i in range(1, n)
        ]
        for i in range(n):
            for _ in range(rng.choice((0, 0, 1, 1, 2))):
                edges.append((f"v{i}", f"v{i}", rng.choice(lengths)))
        if max_edges is not None and len(edges) > max_edges:
            continue
        graph = build_graph(vertices, edges)
        g = graph.total_genus()
        if not 2 <= g <= max_genus:
            continue
        if all(
            graph.classify_node(i) >= 1
            for i, e in enumerate(graph.edges)
            if not e.is_loop
        ):
            return graph


def _random_length(rng: random.Random) -> Fraction:
    if rng.random() < 0.5:
        return rng.choice(LENGTH_POOL)
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def random_plain_graph(rng: random.Random) -> MetrizedGraph:
    """Any connected multigraph: tree plus random extra edges and loops."""
    n = rng.randint(1, 6)
    names = [f"v{i}" if i % 3 else f"n{i}.x-{i}_y" for i in range(n)]
    vertices = [(names[i], rng.randint(0, 3)) for i in range(n)]
    edges = [
        (names[rng.randrange(i)], names[i], _random_length(rng))
        for i in range(1, n)
    ]
    for _ in range(rng.randint(0, 3)):
        a, b = rng.choice(names), rng.choice(names)
        edges.append((a, b, _random_length(rng)))
    return build_graph(vertices, edges)


def random_document(rng: random.Random) -> DocumentModel:
    """A random graph, fibration or class model for round-trip tests."""
    kind = rng.choice(("graph", "fibration", "class"))
    if kind == "graph":
        return DocumentModel("graph", random_plain_graph(rng))
    if kind == "class":
        g = rng.randint(2, 9)
        coeff = lambda: Fraction(rng.randint(-30, 30), rng.randint(1, 7))
        return DocumentModel(
            "class", divisor_class(g, coeff(), [coeff() for _ in range(g // 2 + 1)])
        )
    g = rng.randint(2, 6)
    fibers = []
    for k in range(rng.randint(0, 3)):
        graph = random_stable_fiber(rng, max_tree_edges=3, max_genus=g, lengths=LENGTH_POOL)
        while graph.total_genus() != g:
            graph = random_stable_fiber(rng, max_tree_edges=3, max_genus=g, lengths=LENGTH_POOL)
        fibers.append(Fiber(f"y{k}", graph))
    data = FibrationData(
        g,
        tuple(fibers),
        deg_f_omega=Fraction(rng.randint(0, 9)) if rng.random() < 0.5 else None,
        omega_sq=Fraction(rng.randint(1, 9), 2) if rng.random() < 0.3 else None,
    )
    return DocumentModel("fibration", data)


def random_exact_class_graph(
    rng: random.Random, max_edges: int = 6, max_genus_label: int = 3
) -> MetrizedGraph:
    """A random tree of stable components (any shape, total genus >= 2)
    with at most max_edges edges, lengths in {1/2, 1, 2}, genera <= 3."""
    while True:
        n = rng.randint(1, 4)
        vertices = [(f"v{i}", rng.randint(0, max_genus_label)) for i in range(n)]
        edges = [
            (f"v{rng.randrange(i)}", f"v{i}", rng.choice(LENGTH_POOL))
            for i in range(1, n)
        ]
        for i in range(n):
            for _ in range(rng.choice((0, 0, 1))):
                edges.append((f"v{i}", f"v{i}", rng.choice(LENGTH_POOL)))
        if len(edges) > max_edges:
            continue
        graph = build_graph(vertices, edges)
        if graph.total_genus() >= 2:
            return graph
