"""Exact rational evaluation of admissible Green's functions.

The admissible pair (mu, g) of a polarized metrized graph determines the
constant c = g(D, y) + g(y, y) and the invariant

    eps(G, D) = 2 deg(D) c(G, D) - g(D, D).

Closed forms exist on the compositional class generated by segments,
trees and circles under one-point sums: this module evaluates them with
exact rational arithmetic.  Graphs outside that class (any block that is
neither a bridge nor a self-loop) must go through the numerical oracle
instead; the functions here refuse them with :class:`OutsideExactClass`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DegenerateDivisor,
    DegenerateWeighting,
    InvalidGenus,
    NonpositiveLength,
    NotATree,
    OutsideExactClass,
)
from .graph import Edge, GenusWeighting, GraphDivisor, MetrizedGraph
from .rational import RationalLike, rational


@dataclass(frozen=True)
class PolarizedGraph:
    """A metrized graph together with a divisor of degree != -2."""

    graph: MetrizedGraph
    divisor: GraphDivisor

    def __post_init__(self):
        for v in self.divisor.coefficients:
            self.graph.check_vertex(v)
        if self.divisor.degree == -2:
            raise DegenerateDivisor("divisor degree -2 admits no admissible pair")

    @classmethod
    def canonical(cls, graph: MetrizedGraph) -> "PolarizedGraph":
        """Polarize by the canonical (dualizing) divisor of the dual graph."""
        return cls(graph, graph.canonical_polarization())


@dataclass(frozen=True)
class EpsReport:
    """eps together with its per-edge attribution.

    ``eps`` is the sum of ``per_edge_terms``; ``degree`` is the degree of
    the polarizing divisor.
    """

    eps: Fraction
    per_edge_terms: Mapping[int, Fraction]
    degree: Fraction


# ---------------------------------------------------------------------------
# elementary pieces

def eps_segment(
    a: RationalLike, b: RationalLike, length: RationalLike
) -> tuple[Fraction, Fraction, Fraction]:
    """Segment of given length with divisor (2a-1)P + (2b-1)Q.

    Returns (eps, g(P,P), g(Q,Q)):

        eps = (4ab/(a+b) - 1) l,   g(P,P) = b^2 l/(a+b)^2,
        g(Q,Q) = a^2 l/(a+b)^2.
    """
    a, b, length = rational(a), rational(b), rational(length)
    if length <= 0:
        raise NonpositiveLength(f"segment length {length} must be positive")
    if a + b == 0:
        raise DegenerateDivisor("a + b = 0 makes the segment divisor degree -2")
    eps = (4 * a * b / (a + b) - 1) * length
    g_pp = b**2 * length / (a + b) ** 2
    g_qq = a**2 * length / (a + b) ** 2
    return eps, g_pp, g_qq


def circle_green(length: RationalLike) -> tuple[Fraction, Fraction]:
    """Circle with the zero divisor: returns (g(O,O), eps) = (l/12, 0)."""
    length = rational(length)
    if length <= 0:
        raise NonpositiveLength(f"circle length {length} must be positive")
    return length / 12, Fraction(0)


# ---------------------------------------------------------------------------
# one-point sums

def _check_join_degrees(d1: Fraction, d2: Fraction) -> None:
    if d1 == -2 or d2 == -2 or d1 + d2 == -2:
        raise DegenerateDivisor(
            f"one-point sum needs deg(D1), deg(D2), deg(D1+D2) != -2 "
            f"(got {d1}, {d2})"
        )


def join_eps(
    d1: RationalLike,
    eps1: RationalLike,
    g1_oo: RationalLike,
    d2: RationalLike,
    eps2: RationalLike,
    g2_oo: RationalLike,
) -> Fraction:
    """eps of the one-point sum of two polarized graphs glued at O.

    ``d_i`` are the divisor degrees, ``eps_i`` the invariants of the
    pieces and ``g_i_oo`` the Green values g_i(O, O) at the glue point.
    """
    d1, d2 = rational(d1), rational(d2)
    _check_join_degrees(d1, d2)
    correction = (
        2 * d2 * (d1 + 2) * rational(g1_oo) + 2 * d1 * (d2 + 2) * rational(g2_oo)
    ) / (d1 + d2 + 2)
    return rational(eps1) + rational(eps2) + correction


def join_green(
    d1: RationalLike,
    d2: RationalLike,
    resistance: RationalLike,
    g2_pp: RationalLike,
    g2_oo: RationalLike,
    g1_oo: RationalLike,
) -> Fraction:
    """g(P, P) on a one-point sum, for a point P on the second piece.

    ``resistance`` is the effective resistance between the glue point O
    and P inside the second piece; ``g2_pp``, ``g2_oo``, ``g1_oo`` are the
    Green values of the pieces at P and O.
    """
    d1, d2 = rational(d1), rational(d2)
    _check_join_degrees(d1, d2)
    total = d1 + d2 + 2
    return (
        d1 / total * rational(resistance)
        + (d2 + 2) / total * rational(g2_pp)
        - d1 * (d2 + 2) / total**2 * rational(g2_oo)
        + (d1 + 2) ** 2 / total**2 * rational(g1_oo)
    )


def attach_circle_eps(
    eps: RationalLike, deg_d: RationalLike, length: RationalLike
) -> Fraction:
    """eps after gluing a circle of the given length onto the graph.

    Special case of :func:`join_eps` with the circle as second piece
    (d2 = 0, eps2 = 0, g2(O,O) = l/12):

        eps(G v C, D) = eps(G, D) + deg(D) l / (3 (deg(D) + 2)).
    """
    deg_d, length = rational(deg_d), rational(length)
    if length <= 0:
        raise NonpositiveLength(f"circle length {length} must be positive")
    if deg_d == -2:
        raise DegenerateDivisor("deg(D) = -2 admits no admissible pair")
    return rational(eps) + deg_d * length / (3 * (deg_d + 2))


# ---------------------------------------------------------------------------
# trees

def _checked_weights(
    vertices: Sequence[str], alpha: GenusWeighting
) -> dict[str, Fraction]:
    weights = {v: rational(alpha.get(v, 0)) for v in vertices}
    negative = [v for v, w in weights.items() if w < 0]
    if negative:
        raise DegenerateWeighting(f"negative weight at {negative[0]!r}")
    if sum(weights.values()) == 0:
        raise DegenerateWeighting("weights sum to zero")
    return weights


def _rooted_split_sums(
    vertices: Sequence[str],
    edges: Sequence[tuple[int, Edge]],
    weights: Mapping[str, Fraction],
    root: str,
) -> dict[int, Fraction]:
    """For each (id, edge) of a tree, the weight of the side away from ``root``."""
    incidence: dict[str, list[tuple[int, Edge, str]]] = {v: [] for v in vertices}
    for eid, e in edges:
        incidence[e.a].append((eid, e, e.b))
        incidence[e.b].append((eid, e, e.a))

    parent_edge: dict[str, int] = {}
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid, _, w in incidence[v]:
            if w in seen:
                continue
            seen.add(w)
            parent_edge[w] = eid
            order.append(w)
            queue.append(w)
    if len(seen) != len(vertices) or len(edges) != len(vertices) - 1:
        raise NotATree("edge set is not a spanning tree of the vertex set")

    subtree = {v: weights[v] for v in vertices}
    for v in reversed(order[1:]):
        parent = next(
            w for eid, _, w in incidence[v] if eid == parent_edge[v]
        )
        subtree[parent] += subtree[v]
    return {parent_edge[v]: subtree[v] for v in order[1:]}


def _require_tree(graph: MetrizedGraph) -> None:
    if graph.first_betti() != 0:
        raise NotATree("graph has a cycle; tree formulas do not apply")


def tree_green(graph: MetrizedGraph, alpha: GenusWeighting, p: str) -> Fraction:
    """g(P, P) on a tree polarized by D(alpha).

    Sum over edges of (weight of the component away from P / total)^2
    times the edge length.
    """
    _require_tree(graph)
    graph.check_vertex(p)
    weights = _checked_weights(graph.vertices, alpha)
    total = sum(weights.values())
    away = _rooted_split_sums(
        graph.vertices, list(enumerate(graph.edges)), weights, p
    )
    return sum(
        ((away[eid] / total) ** 2 * graph.edges[eid].length for eid in away),
        Fraction(0),
    )


def _tree_eps_terms(
    vertices: Sequence[str],
    edges: Sequence[tuple[int, Edge]],
    weights: Mapping[str, Fraction],
) -> dict[int, Fraction]:
    total = sum(weights.values())
    away = _rooted_split_sums(vertices, edges, weights, vertices[0])
    by_id = dict(edges)
    return {
        eid: (4 * s * (total - s) / total - 1) * by_id[eid].length
        for eid, s in away.items()
    }


def tree_eps(graph: MetrizedGraph, alpha: GenusWeighting) -> EpsReport:
    """eps of a tree polarized by D(alpha), with per-edge attribution.

    Each edge splits the tree in two; writing A', A'' for the two side
    weights and A for their sum, the edge contributes
    (4 A' A'' / A - 1) l(e).
    """
    _require_tree(graph)
    weights = _checked_weights(graph.vertices, alpha)
    terms = _tree_eps_terms(graph.vertices, list(enumerate(graph.edges)), weights)
    terms = {i: terms[i] for i in sorted(terms)}
    degree = 2 * sum(weights.values()) - 2
    return EpsReport(sum(terms.values(), Fraction(0)), terms, degree)


# ---------------------------------------------------------------------------
# trees of stable components

def eps_polarized(pg: PolarizedGraph) -> EpsReport:
    """eps for a canonically polarized tree of stable components.

    Works on the stable model: after contracting genus-0 valence-2
    vertices, strips the self-loops, runs the tree formula with each
    vertex weighted by its component's arithmetic genus (vertex genus
    plus the number of self-loops there), and accounts one circle
    attachment per self-loop.  Per-edge terms are keyed by original edge
    ids; an original edge inherits the length-proportional share of the
    stabilized edge it belongs to, so a loop edge of length l contributes
    (g-1) l / (3g).
    """
    graph = pg.graph
    g = graph.total_genus()
    if g < 2:
        raise InvalidGenus(f"polarized eps needs total genus >= 2, got {g}")
    if pg.divisor != graph.canonical_polarization():
        raise ValueError("divisor is not the canonical polarization of the graph")

    stable, origins = graph._stabilized_with_origins()
    loops = sum(1 for e in stable.edges if e.is_loop)
    if stable.first_betti() != loops:
        raise OutsideExactClass(
            "a block is neither a bridge nor a self-loop; use the oracle"
        )

    tree_edges = [(i, e) for i, e in enumerate(stable.edges) if not e.is_loop]
    weights = {
        v: Fraction(stable.genus[v] + stable.loops_at(v)) for v in stable.vertices
    }
    stable_terms = _tree_eps_terms(stable.vertices, tree_edges, weights)

    deg_d = Fraction(2 * g - 2)
    for i, e in enumerate(stable.edges):
        if e.is_loop:
            stable_terms[i] = deg_d * e.length / (3 * (deg_d + 2))

    terms: dict[int, Fraction] = {}
    for i, e in enumerate(stable.edges):
        per_length = stable_terms[i] / e.length
        for orig in origins[i]:
            terms[orig] = per_length * graph.edges[orig].length
    terms = {i: terms[i] for i in sorted(terms)}
    return EpsReport(sum(terms.values(), Fraction(0)), terms, deg_d)


def eps_chain(g: int, deltas: Sequence[int]) -> Fraction:
    """Closed form of eps for a genus-g fiber with unit-length nodes:

        (g-1)/(3g) delta_0 + sum_i (4i(g-i)/g - 1) delta_i.
    """
    if g < 2:
        raise InvalidGenus(f"chain closed form needs g >= 2, got {g}")
    if len(deltas) != g // 2 + 1:
        raise ValueError(
            f"expected {g // 2 + 1} delta entries for g = {g}, got {len(deltas)}"
        )
    if any(d < 0 for d in deltas):
        raise ValueError("delta counts must be nonnegative")
    result = Fraction(g - 1, 3 * g) * deltas[0]
    for i in range(1, len(deltas)):
        result += (Fraction(4 * i * (g - i), g) - 1) * deltas[i]
    return result


def resistance_exact(graph: MetrizedGraph, p: str, q: str) -> Fraction:
    """Effective resistance between two vertices of a graph whose blocks
    are bridges or self-loops: the sum of bridge lengths on the unique
    p-q path (self-loops never lie on the path).

    Unlike :func:`eps_polarized` this needs literal self-loops, not
    subdivided ones: a vertex inside a subdivided loop sees two parallel
    arcs, which have no closed form here.
    """
    graph.check_vertex(p)
    graph.check_vertex(q)
    loops = sum(1 for e in graph.edges if e.is_loop)
    if graph.first_betti() != loops:
        raise OutsideExactClass(
            "resistance has a closed form only when every block is a bridge "
            "or a self-loop; use the oracle"
        )
    if p == q:
        return Fraction(0)
    parent: dict[str, tuple[str, Fraction]] = {p: (p, Fraction(0))}
    queue = deque([p])
    while queue:
        v = queue.popleft()
        if v == q:
            break
        for e in graph.edges:
            if e.is_loop:
                continue
            for here, there in ((e.a, e.b), (e.b, e.a)):
                if here == v and there not in parent:
                    parent[there] = (v, e.length)
                    queue.append(there)
    total = Fraction(0)
    v = q
    while v != p:
        v, length = parent[v]
        total += length
    return total
