import random
from fractions import Fraction

import pytest

from admissible import (
    PolarizedGraph,
    attach_circle_eps,
    build_graph,
    circle_green,
    eps_chain,
    eps_polarized,
    eps_segment,
    join_eps,
    join_green,
    resistance_exact,
    tree_eps,
    tree_green,
)
from admissible.errors import (
    DegenerateDivisor,
    DegenerateWeighting,
    NotATree,
    OutsideExactClass,
)
from conftest import random_stable_fiber, random_tree, random_weighting

F = Fraction


def path_graph(lengths, genera=None):
    n = len(lengths) + 1
    genera = genera or [0] * n
    vertices = [(f"v{i}", genera[i]) for i in range(n)]
    edges = [(f"v{i}", f"v{i+1}", lengths[i]) for i in range(len(lengths))]
    return build_graph(vertices, edges)


# ---------------------------------------------------------------------------
# elementary pieces

def test_eps_segment_values():
    assert eps_segment(1, 1, 1) == (F(1), F(1, 4), F(1, 4))
    assert eps_segment(1, 2, 1) == (F(5, 3), F(4, 9), F(1, 9))
    assert eps_segment(0, 1, 7) == (F(-7), F(7), F(0))


def test_eps_segment_degenerate():
    with pytest.raises(DegenerateDivisor):
        eps_segment(1, -1, 1)


def test_circle_green_values():
    assert circle_green(1) == (F(1, 12), 0)
    assert circle_green(12) == (F(1), 0)
    assert circle_green(F(1, 3)) == (F(1, 36), 0)


def test_join_eps_two_segments():
    eps, _, g_oo = eps_segment(1, 1, 1)
    assert join_eps(2, eps, g_oo, 2, eps, g_oo) == F(10, 3)


def test_join_eps_degree_zero_pieces():
    assert join_eps(0, F(3), 5, 0, F(1, 2), 5) == F(7, 2)


def test_join_eps_reproduces_circle_attachment():
    for d1 in (F(0), F(1), F(2), F(7, 3), F(-1)):
        for length in (F(1), F(1, 2), F(5, 3)):
            eps1, g1_oo = F(4, 7), F(2, 5)
            assert join_eps(d1, eps1, g1_oo, 0, 0, length / 12) == attach_circle_eps(
                eps1, d1, length
            )


def test_join_eps_degenerate_degrees():
    with pytest.raises(DegenerateDivisor):
        join_eps(-2, 0, 0, 0, 0, 0)
    with pytest.raises(DegenerateDivisor):
        join_eps(0, 0, 0, -2, 0, 0)
    with pytest.raises(DegenerateDivisor):
        join_eps(-1, 0, 0, -1, 0, 0)


def test_join_green_path():
    # path v1-v2-v3 with unit weights, evaluated at the far endpoint
    assert join_green(2, 2, 1, F(1, 4), F(1, 4), F(1, 4)) == F(5, 9)


def test_join_green_degree_zero():
    assert join_green(0, 0, F(3), F(2, 7), F(9), F(1, 5)) == F(2, 7) + F(1, 5)


def test_join_green_at_glue_point_is_symmetric():
    # P = O: swapping the two pieces must give the same value
    d1, d2 = F(2), F(4)
    g1_oo, g2_oo = F(1, 4), F(1, 9)
    forward = join_green(d1, d2, 0, g2_oo, g2_oo, g1_oo)
    swapped = join_green(d2, d1, 0, g1_oo, g1_oo, g2_oo)
    assert forward == swapped


def test_attach_circle_eps_values():
    assert attach_circle_eps(0, 2, 1) == F(1, 6)
    assert attach_circle_eps(F(5, 3), 0, 100) == F(5, 3)
    assert attach_circle_eps(F(5, 3), 4, 2) == F(19, 9)
    with pytest.raises(DegenerateDivisor):
        attach_circle_eps(0, -2, 1)


# ---------------------------------------------------------------------------
# trees

def test_tree_green_segment():
    seg = path_graph([1])
    assert tree_green(seg, {"v0": 1, "v1": 1}, "v0") == F(1, 4)


def test_tree_green_path():
    path = path_graph([1, 1])
    alpha = {"v0": 1, "v1": 1, "v2": 1}
    assert tree_green(path, alpha, "v2") == F(5, 9)
    assert tree_green(path, alpha, "v1") == F(2, 9)


def test_tree_eps_segment_matches_closed_form():
    seg = path_graph([1])
    report = tree_eps(seg, {"v0": 1, "v1": 2})
    assert report.eps == F(5, 3)
    assert report.degree == 4


def test_tree_eps_path():
    report = tree_eps(path_graph([1, 1]), {"v0": 1, "v1": 1, "v2": 1})
    assert report.eps == F(10, 3)
    assert report.per_edge_terms == {0: F(5, 3), 1: F(5, 3)}
    assert report.eps == sum(report.per_edge_terms.values())


def test_tree_eps_star():
    star = build_graph(
        [("c", 0), ("x", 0), ("y", 0), ("z", 0)],
        [("c", "x", 1), ("c", "y", 1), ("c", "z", 1)],
    )
    report = tree_eps(star, {"c": 0, "x": 1, "y": 1, "z": 1})
    assert report.eps == 5


def test_tree_eps_rejects_cycles_and_bad_weights():
    loop = build_graph([("v", 0)], [("v", "v", 1)])
    with pytest.raises(NotATree):
        tree_eps(loop, {"v": 1})
    seg = path_graph([1])
    with pytest.raises(DegenerateWeighting):
        tree_eps(seg, {"v0": 0, "v1": 0})
    with pytest.raises(DegenerateWeighting):
        tree_eps(seg, {"v0": -1, "v1": 2})


def test_tree_term_swap_symmetry():
    # reversing every edge orientation relabels the two sides of each
    # split; the per-edge terms must not move
    rng = random.Random(3)
    for _ in range(20):
        tree = random_tree(rng, max_edges=8)
        alpha = random_weighting(rng, tree)
        forward = tree_eps(tree, alpha)
        flipped = build_graph(
            [(v, 0) for v in tree.vertices],
            [(e.b, e.a, e.length) for e in tree.edges],
        )
        assert tree_eps(flipped, alpha).per_edge_terms == forward.per_edge_terms


def test_length_linearity():
    rng = random.Random(5)
    for _ in range(20):
        tree = random_tree(rng, max_edges=6)
        alpha = random_weighting(rng, tree)
        scale = F(rng.randint(1, 9), rng.randint(1, 9))
        scaled = build_graph(
            [(v, 0) for v in tree.vertices],
            [(e.a, e.b, e.length * scale) for e in tree.edges],
        )
        assert tree_eps(scaled, alpha).eps == scale * tree_eps(tree, alpha).eps
        p = tree.vertices[0]
        assert tree_green(scaled, alpha, p) == scale * tree_green(tree, alpha, p)


def test_subdivision_invariance_of_tree_formulas():
    rng = random.Random(9)
    for _ in range(20):
        tree = random_tree(rng, max_edges=6)
        if not tree.edges:
            continue
        alpha = random_weighting(rng, tree)
        eid = rng.randrange(len(tree.edges))
        t = tree.edges[eid].length * F(1, 3)
        split = tree.subdivide_edge(eid, t)
        assert tree_eps(split, alpha).eps == tree_eps(tree, alpha).eps
        p = tree.vertices[0]
        assert tree_green(split, alpha, p) == tree_green(tree, alpha, p)


def test_weight_continuity_from_above():
    # eps(alpha + t) approaches eps(alpha) monotonically as t = 1/2^k -> 0
    tree = path_graph([1, F(1, 2), 2, 1])
    alpha = {"v0": 2, "v1": 0, "v2": 0, "v3": 1, "v4": 0}
    base = tree_eps(tree, alpha).eps
    gaps = []
    for k in range(1, 21):
        t = F(1, 2**k)
        shifted = {v: alpha[v] + t for v in alpha}
        gaps.append(abs(tree_eps(tree, shifted).eps - base))
    assert all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    assert gaps[-1] < F(1, 2**15)


# ---------------------------------------------------------------------------
# trees of stable components

def test_eps_polarized_loop_fiber():
    loop = build_graph([("v", 1)], [("v", "v", 1)])
    report = eps_polarized(PolarizedGraph.canonical(loop))
    assert report.eps == F(1, 6)
    assert report.degree == 2


def test_eps_polarized_two_components():
    two = build_graph([("a", 1), ("b", 2)], [("a", "b", 1)])
    report = eps_polarized(PolarizedGraph.canonical(two))
    assert report.eps == F(5, 3)


def test_eps_polarized_weights_count_self_loops():
    # loop at p makes its component arithmetic genus 2, so the bridge is
    # a type-1 node of a genus-3 fiber
    graph = build_graph(
        [("p", 1), ("q", 1)], [("p", "p", 1), ("p", "q", 1)]
    )
    report = eps_polarized(PolarizedGraph.canonical(graph))
    assert report.eps == F(2, 9) + F(5, 3)
    assert report.per_edge_terms[0] == F(2, 9)
    assert report.per_edge_terms[1] == F(5, 3)
    assert report.eps == eps_chain(3, graph.node_type_counts())


def test_eps_polarized_rejects_banana():
    banana = build_graph([("a", 1), ("b", 1)], [("a", "b", 1), ("a", "b", 1)])
    with pytest.raises(OutsideExactClass):
        eps_polarized(PolarizedGraph.canonical(banana))


def test_eps_polarized_subdivision_invariant():
    loop = build_graph([("v", 1)], [("v", "v", 1)])
    split = loop.subdivide_edge(0, F(1, 3))
    report = eps_polarized(PolarizedGraph.canonical(split))
    assert report.eps == F(1, 6)
    assert report.per_edge_terms == {0: F(1, 18), 1: F(1, 9)}


def test_eps_chain_values():
    assert eps_chain(2, (1, 0)) == F(1, 6)
    assert eps_chain(3, (0, 1)) == F(5, 3)
    assert eps_chain(2, (0, 0)) == 0


def test_eps_polarized_matches_chain_closed_form():
    rng = random.Random(17)
    for _ in range(50):
        graph = random_stable_fiber(rng, max_tree_edges=5, max_genus=10)
        report = eps_polarized(PolarizedGraph.canonical(graph))
        assert report.eps == eps_chain(graph.total_genus(), graph.node_type_counts())


# ---------------------------------------------------------------------------
# resistance

def test_resistance_exact_series():
    path = path_graph([F(1, 2), F(1, 3)])
    assert resistance_exact(path, "v0", "v2") == F(5, 6)
    assert resistance_exact(path, "v1", "v1") == 0


def test_resistance_exact_ignores_loops():
    graph = build_graph(
        [("a", 0), ("b", 1), ("c", 0)],
        [("a", "b", F(1, 2)), ("b", "b", 5), ("b", "c", F(1, 3))],
    )
    assert resistance_exact(graph, "a", "c") == F(5, 6)


def test_resistance_exact_refuses_cycles():
    banana = build_graph([("a", 1), ("b", 1)], [("a", "b", 1), ("a", "b", 1)])
    with pytest.raises(OutsideExactClass):
        resistance_exact(banana, "a", "b")
