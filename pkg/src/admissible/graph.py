"""Metrized graphs arising as dual graphs of semistable fibers.

A graph carries a nonnegative integer genus on each vertex and a positive
rational length on each edge; self-loops and parallel edges are allowed.
Vertices are identified by strings, edges by their position in the input
order (stable small integers).  All values are immutable after
construction and every operation is a pure function, so instances are safe
to share between threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DisconnectedGraph,
    InvalidGenus,
    NonpositiveLength,
    ParameterOutOfRange,
    UnknownEdge,
    UnknownVertex,
)
from .rational import RationalLike, rational

#: Vertex weightings alpha: vertex id -> nonnegative rational (absent => 0).
GenusWeighting = Mapping[str, RationalLike]


@dataclass(frozen=True)
class Edge:
    """An unoriented edge; ``a == b`` encodes a self-loop."""

    a: str
    b: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.a == self.b

    def other(self, v: str) -> str:
        return self.b if v == self.a else self.a


@dataclass(frozen=True)
class GraphDivisor:
    """Rational coefficients supported on vertices (absent => 0).

    Zero coefficients are dropped at construction, so two divisors are
    equal exactly when they agree as functions on vertices.
    """

    coefficients: Mapping[str, Fraction]

    def __post_init__(self):
        normalized = {
            v: rational(c) for v, c in self.coefficients.items() if c != 0
        }
        object.__setattr__(self, "coefficients", normalized)

    def __getitem__(self, vertex: str) -> Fraction:
        return self.coefficients.get(vertex, Fraction(0))

    @property
    def degree(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, c in self.coefficients.items() if c != 0)


@dataclass(frozen=True)
class MetrizedGraph:
    """A connected metrized graph with genus-labelled vertices.

    Use :func:`build_graph` to construct one from plain data; the
    constructor validates connectivity, positivity of lengths and genus
    labels, and rejects edges naming undeclared vertices.
    """

    vertices: tuple[str, ...]
    genus: Mapping[str, int]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.vertices:
            raise UnknownVertex("a metrized graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise UnknownVertex("duplicate vertex id")
        for v in self.vertices:
            g = self.genus.get(v)
            if g is None or not isinstance(g, int) or g < 0:
                raise InvalidGenus(f"vertex {v!r} needs a genus label >= 0")
        for e in self.edges:
            for end in (e.a, e.b):
                if end not in self.genus:
                    raise UnknownVertex(f"edge endpoint {end!r} is not a declared vertex")
            if e.length <= 0:
                raise NonpositiveLength(f"edge {e.a!r}-{e.b!r} has length {e.length}")
        if len(self._reachable_from(self.vertices[0])) != len(self.vertices):
            raise DisconnectedGraph("the metrized graph is not connected")

    # -- basic bookkeeping -------------------------------------------------

    @cached_property
    def _incidence(self) -> dict[str, list[tuple[int, str]]]:
        """vertex -> [(edge id, other endpoint)]; self-loops listed twice."""
        inc: dict[str, list[tuple[int, str]]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            inc[e.a].append((i, e.b))
            inc[e.b].append((i, e.a))
        return inc

    def _reachable_from(self, start: str, skip_edge: int | None = None) -> set[str]:
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for eid, w in self._incidence[v]:
                if eid == skip_edge or w in seen:
                    continue
                seen.add(w)
                queue.append(w)
        return seen

    def check_vertex(self, v: str) -> str:
        if v not in self.genus:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return v

    def check_edge(self, e: int) -> Edge:
        if not 0 <= e < len(self.edges):
            raise UnknownEdge(f"unknown edge id {e}")
        return self.edges[e]

    def first_betti(self) -> int:
        """Cycle rank E - V + 1 of the underlying graph."""
        return len(self.edges) - len(self.vertices) + 1

    def total_genus(self) -> int:
        """Arithmetic genus of a fiber with this dual graph: sum of vertex
        genera plus the cycle rank."""
        return sum(self.genus.values()) + self.first_betti()

    def valence(self, v: str) -> int:
        """Number of edge-ends at ``v``; a self-loop contributes 2."""
        self.check_vertex(v)
        return len(self._incidence[v])

    def loops_at(self, v: str) -> int:
        self.check_vertex(v)
        return sum(1 for e in self.edges if e.is_loop and e.a == v)

    def is_bridge(self, e: int) -> bool:
        """True when deleting edge ``e`` disconnects the graph."""
        edge = self.check_edge(e)
        if edge.is_loop:
            return False
        return edge.b not in self._reachable_from(edge.a, skip_edge=e)

    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    # -- polarization and node types ----------------------------------------

    def canonical_polarization(self) -> GraphDivisor:
        """The dualizing-sheaf divisor: coefficient 2*genus(v) - 2 + valence(v).

        Its degree is 2*total_genus() - 2.
        """
        return divisor_of_weighting(
            self, {v: Fraction(self.genus[v]) for v in self.vertices}
        )

    def classify_node(self, e: int) -> int:
        """Type of the node corresponding to edge ``e``.

        Deleting the edge (partial normalization at the node) either keeps
        the graph connected (type 0) or splits it into two components; the
        type is then the smaller of the two component genera.
        """
        edge = self.check_edge(e)
        side_a = self._reachable_from(edge.a, skip_edge=e)
        if edge.b in side_a:
            return 0
        side_b = set(self.vertices) - side_a
        kind = min(self._component_genus(side_a), self._component_genus(side_b))
        assert 2 * kind <= self.total_genus()
        return kind

    def _component_genus(self, component: set[str]) -> int:
        internal = sum(
            1 for e in self.edges if e.a in component and e.b in component
        )
        return sum(self.genus[v] for v in component) + internal - len(component) + 1

    def node_type_counts(self) -> tuple[int, ...]:
        """delta_i = number of edges of type i, for i = 0..floor(g/2)."""
        g = self.total_genus()
        if g < 2:
            raise InvalidGenus(f"node type counts need total genus >= 2, got {g}")
        counts = [0] * (g // 2 + 1)
        for e in range(len(self.edges)):
            counts[self.classify_node(e)] += 1
        return tuple(counts)

    def is_tree_of_stable_components(self) -> bool:
        """True when, on the stable model, every cycle is a self-loop.

        Genus-0 valence-2 vertices (subdivision points / chains of rational
        components) are contracted first, so the answer is invariant under
        edge subdivision.  On stable-model inputs this is simply "deleting
        all self-loops leaves a tree".
        """
        graph, _ = self._stabilized_with_origins()
        loops = sum(1 for e in graph.edges if e.is_loop)
        return graph.first_betti() == loops

    def stabilized(self) -> "MetrizedGraph":
        """The stable model of the dual graph: genus-0 valence-2 vertices
        are contracted, merging their two edge segments into one edge of
        the summed length.  Total genus, cycle rank and the degree of the
        canonical polarization are preserved."""
        return self._stabilized_with_origins()[0]

    def _stabilized_with_origins(
        self,
    ) -> tuple["MetrizedGraph", tuple[tuple[int, ...], ...]]:
        """Stabilize and track, per stabilized edge, the original edge ids
        merged into it (in original order)."""
        vertices = list(self.vertices)
        # edge record: (endpoint a, endpoint b, length, original edge ids)
        edges: list[tuple[str, str, Fraction, tuple[int, ...]]] = [
            (e.a, e.b, e.length, (i,)) for i, e in enumerate(self.edges)
        ]
        while True:
            contracted = False
            for v in vertices:
                if self.genus[v] != 0:
                    continue
                incident = [
                    (k, rec) for k, rec in enumerate(edges) if v in (rec[0], rec[1])
                ]
                ends = sum((rec[0] == v) + (rec[1] == v) for _, rec in incident)
                # valence 2 through two distinct edges; a self-loop vertex
                # (both ends on one edge) is already a stable circle
                if ends != 2 or len(incident) != 2:
                    continue
                (k1, r1), (k2, r2) = incident
                a = r1[1] if r1[0] == v else r1[0]
                b = r2[1] if r2[0] == v else r2[0]
                merged = (a, b, r1[2] + r2[2], tuple(sorted(r1[3] + r2[3])))
                edges = [rec for k, rec in enumerate(edges) if k not in (k1, k2)]
                edges.append(merged)
                vertices.remove(v)
                contracted = True
                break
            if not contracted:
                break
        graph = MetrizedGraph(
            tuple(vertices),
            {v: self.genus[v] for v in vertices},
            tuple(Edge(a, b, length) for a, b, length, _ in edges),
        )
        return graph, tuple(origins for _, _, _, origins in edges)

    # -- subdivision ---------------------------------------------------------

    def subdivide_edge(self, e: int, t: RationalLike) -> "MetrizedGraph":
        """Split edge ``e`` at distance ``t`` from its first endpoint.

        The split point becomes a fresh genus-0 vertex of valence 2, which
        leaves the total genus, the cycle rank and the canonical
        polarization degree unchanged.  Edge ``e`` keeps its id for the
        first half; the second half is appended.
        """
        edge = self.check_edge(e)
        t = rational(t)
        if not 0 < t < edge.length:
            raise ParameterOutOfRange(
                f"split point {t} outside (0, {edge.length}) on edge {e}"
            )
        mid = self._fresh_vertex_id()
        edges = list(self.edges)
        edges[e] = Edge(edge.a, mid, t)
        edges.append(Edge(mid, edge.b, edge.length - t))
        genus = dict(self.genus)
        genus[mid] = 0
        return MetrizedGraph(self.vertices + (mid,), genus, tuple(edges))

    def _fresh_vertex_id(self) -> str:
        k = 0
        while f"s{k}" in self.genus:
            k += 1
        return f"s{k}"


def build_graph(
    vertices: Iterable[tuple[str, int]],
    edges: Iterable[tuple[str, str, RationalLike]] = (),
) -> MetrizedGraph:
    """Validating constructor from plain (id, genus) and (a, b, length) data."""
    vertex_ids = []
    genus = {}
    for vid, g in vertices:
        vertex_ids.append(vid)
        genus[vid] = g
    edge_list = tuple(Edge(a, b, rational(length)) for a, b, length in edges)
    return MetrizedGraph(tuple(vertex_ids), genus, edge_list)


def divisor_of_weighting(graph: MetrizedGraph, alpha: GenusWeighting) -> GraphDivisor:
    """The divisor D(alpha) with coefficient 2*alpha(v) - 2 + valence(v).

    Vertices absent from ``alpha`` get weight 0.  The degree identity
    deg D(alpha) + 2 == 2 * (sum(alpha) + first_betti) holds by
    construction and is asserted on every call; on a tree it reads
    deg D(alpha) + 2 == 2 * sum(alpha).
    """
    for v in alpha:
        graph.check_vertex(v)
    coeffs = {
        v: 2 * rational(alpha.get(v, 0)) - 2 + graph.valence(v)
        for v in graph.vertices
    }
    divisor = GraphDivisor(coeffs)
    total = sum((rational(alpha.get(v, 0)) for v in graph.vertices), Fraction(0))
    assert divisor.degree + 2 == 2 * (total + graph.first_betti())
    return divisor
