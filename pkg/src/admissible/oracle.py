"""Independent numerical solver for admissible pairs on metrized graphs.

The exact engine covers only graphs whose blocks are bridges or
self-loops.  This oracle works on any connected metrized graph: it
discretizes each edge into equal resistor segments, builds the weighted
grid Laplacian, and realizes the admissible measure and Green's function
through effective resistances:

    mu    = (delta_D + 2 mu_can) / (deg D + 2)
    g(x,y) = (F(x) + F(y) - r(x,y) - Rbar) / 2,
             F(x) = integral of r(x, .) d mu,  Rbar = double integral of r

where mu_can is the canonical measure (vertex masses 1 - valence/2 plus
a uniform density l(e)/(l(e)+R_e) per non-bridge edge, R_e being the
resistance between the endpoints with the edge removed).  The measure
construction is not itself part of the defining contract; what is checked
on every solve are the residuals of the five defining properties:

    (a) total mass 1, (b) symmetry, (c) Laplacian_y g(x,.) = delta_x - mu,
    (d) integral g(x,.) d mu = 0, (e) g(D,y) + g(y,y) constant.

Those residuals travel with every :class:`AdmissibleSolution`; the oracle
corroborates the exact engine but never certifies anything beyond them.
Everything here is 64-bit floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy.sparse import csc_matrix, csr_matrix
from scipy.sparse.linalg import splu

from .errors import DegenerateDivisor, SingularSolve, ToleranceExceeded
from .graph import GenusWeighting, GraphDivisor, MetrizedGraph, divisor_of_weighting
from .rational import RationalLike, rational

_DIAG_BLOCK = 512


@dataclass(frozen=True)
class DiscretizedGraph:
    """A metrized graph split into equal resistor segments.

    Grid point order: original vertices first (input order), then the
    interior points of each edge in edge-id order, walking from the first
    endpoint to the second.  Conductance of a segment is 1/length, and
    the total length of every edge is preserved exactly.
    """

    graph: MetrizedGraph
    h: float
    n: int
    vertex_index: Mapping[str, int]
    laplacian: csr_matrix = field(repr=False)
    #: per edge: (segment count, segment length, first interior grid index)
    edge_segments: tuple[tuple[int, float, int], ...]

    def interior_points(self, edge_id: int) -> range:
        count, _, start = self.edge_segments[edge_id]
        return range(start, start + count - 1)

    def point_location(self, index: int) -> tuple[str, float] | tuple[int, float]:
        """Back-map: (vertex id, 0.0) or (edge id, offset from endpoint a)."""
        if index < len(self.graph.vertices):
            return self.graph.vertices[index], 0.0
        for eid, (count, seg, start) in enumerate(self.edge_segments):
            if start <= index < start + count - 1:
                return eid, (index - start + 1) * seg
        raise IndexError(index)

    def chain(self, edge_id: int) -> list[int]:
        """Grid indices along an edge: endpoint a, interiors, endpoint b."""
        edge = self.graph.edges[edge_id]
        return (
            [self.vertex_index[edge.a]]
            + list(self.interior_points(edge_id))
            + [self.vertex_index[edge.b]]
        )


def _segment_count(length: Fraction, h: Fraction, is_loop: bool) -> int:
    count = math.ceil(length / h)
    # an unsubdivided self-loop would drop out of the Laplacian entirely
    if is_loop:
        count = max(count, 2)
    return max(count, 1)


def discretize(graph: MetrizedGraph, h: RationalLike) -> DiscretizedGraph:
    """Split every edge of length l into ceil(l/h) equal segments."""
    h = rational(h)
    if h <= 0:
        raise ValueError(f"mesh parameter must be positive, got {h}")
    vertex_index = {v: i for i, v in enumerate(graph.vertices)}
    next_index = len(graph.vertices)
    edge_segments = []
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    def add_segment(i: int, j: int, conductance: float) -> None:
        rows.extend((i, j, i, j))
        cols.extend((i, j, j, i))
        vals.extend((conductance, conductance, -conductance, -conductance))

    for edge in graph.edges:
        count = _segment_count(edge.length, h, edge.is_loop)
        seg = float(edge.length) / count
        start = next_index
        next_index += count - 1
        edge_segments.append((count, seg, start))
        chain = (
            [vertex_index[edge.a]]
            + list(range(start, start + count - 1))
            + [vertex_index[edge.b]]
        )
        for i, j in zip(chain, chain[1:]):
            add_segment(i, j, 1.0 / seg)

    n = next_index
    laplacian = csr_matrix(
        (np.asarray(vals), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n, n),
    )
    return DiscretizedGraph(graph, float(h), n, vertex_index, laplacian, tuple(edge_segments))


class _GroundedSolver:
    """Solves with the grid Laplacian grounded at node 0.

    The grounded inverse J (zero row/column at the ground) yields effective
    resistances as r(x, y) = J[x,x] + J[y,y] - 2 J[x,y].
    """

    def __init__(self, disc: DiscretizedGraph):
        self.n = disc.n
        if self.n > 1:
            reduced = csc_matrix(disc.laplacian[1:, 1:])
            try:
                self._lu = splu(reduced)
            except RuntimeError as exc:
                raise SingularSolve(f"grid Laplacian factorization failed: {exc}") from exc

    def column(self, rhs: np.ndarray) -> np.ndarray:
        """J @ rhs for a full-grid right-hand side."""
        if self.n == 1:
            return np.zeros(1)
        out = np.zeros(self.n)
        out[1:] = self._lu.solve(rhs[1:])
        if not np.all(np.isfinite(out)):
            raise SingularSolve("grid Laplacian solve produced non-finite values")
        return out

    def diagonal(self) -> np.ndarray:
        """diag(J), extracted by blocks of solves against identity columns."""
        diag = np.zeros(self.n)
        if self.n == 1:
            return diag
        m = self.n - 1
        for start in range(0, m, _DIAG_BLOCK):
            stop = min(start + _DIAG_BLOCK, m)
            rhs = np.zeros((m, stop - start))
            rhs[np.arange(start, stop), np.arange(stop - start)] = 1.0
            block = self._lu.solve(rhs)
            diag[1 + start : 1 + stop] = block[np.arange(start, stop), np.arange(stop - start)]
        if not np.all(np.isfinite(diag)):
            raise SingularSolve("grid Laplacian solve produced non-finite values")
        return diag


def resistance_numeric(graph: MetrizedGraph, p: str, q: str, h: RationalLike) -> float:
    """Effective resistance between two vertices, from the grid Laplacian.

    The discretized network is resistively equivalent to the metrized
    graph, so vertex-to-vertex values are mesh-independent up to solver
    precision.
    """
    graph.check_vertex(p)
    graph.check_vertex(q)
    if p == q:
        return 0.0
    disc = discretize(graph, h)
    solver = _GroundedSolver(disc)
    ip, iq = disc.vertex_index[p], disc.vertex_index[q]
    rhs = np.zeros(disc.n)
    rhs[ip] += 1.0
    rhs[iq] -= 1.0
    potential = solver.column(rhs)
    return float(potential[ip] - potential[iq])


def _edge_deleted_resistance(graph: MetrizedGraph, edge_id: int, h: RationalLike) -> float:
    """R_e: resistance between the endpoints of ``edge_id`` in the graph
    with that edge removed; inf when the edge is a bridge, 0 for loops."""
    edge = graph.edges[edge_id]
    if edge.is_loop:
        return 0.0
    if graph.is_bridge(edge_id):
        return math.inf
    remaining = MetrizedGraph(
        graph.vertices,
        graph.genus,
        tuple(e for i, e in enumerate(graph.edges) if i != edge_id),
    )
    return resistance_numeric(remaining, edge.a, edge.b, h)


def _canonical_measure_on(disc: DiscretizedGraph, h: RationalLike) -> np.ndarray:
    graph = disc.graph
    mass = np.zeros(disc.n)
    for v, i in disc.vertex_index.items():
        mass[i] = 1.0 - graph.valence(v) / 2.0
    for eid, edge in enumerate(graph.edges):
        r_deleted = _edge_deleted_resistance(graph, eid, h)
        if math.isinf(r_deleted):
            continue  # bridges carry no edge density
        count, seg, _ = disc.edge_segments[eid]
        seg_mass = seg / (float(edge.length) + r_deleted)
        chain = disc.chain(eid)
        for i, j in zip(chain, chain[1:]):
            mass[i] += seg_mass / 2.0
            mass[j] += seg_mass / 2.0
    return mass


def canonical_measure(graph: MetrizedGraph, h: RationalLike) -> np.ndarray:
    """The canonical measure, discretized on the grid of mesh ``h``.

    Point mass 1 - valence/2 at each vertex; per non-bridge edge a uniform
    density of total mass l(e)/(l(e)+R_e), lumped trapezoidally onto the
    grid.  The total is 1 for every connected graph.
    """
    return _canonical_measure_on(discretize(graph, h), h)


@dataclass(frozen=True)
class AdmissibleSolution:
    """Discretized admissible pair plus the residuals of its contract.

    ``green`` holds g(x, y) for pairs of original vertices (the divisor is
    supported there; subdivide an edge first to expose interior points);
    ``green_diag`` has g(y, y) for every grid point.  ``residuals`` maps
    the property names "mass", "symmetry", "laplacian", "orthogonality",
    "constancy" to their maximal absolute violations.
    """

    graph: MetrizedGraph
    h: float
    mu: np.ndarray = field(repr=False)
    green: np.ndarray = field(repr=False)
    green_diag: np.ndarray = field(repr=False)
    c: float
    eps: float
    residuals: Mapping[str, float]
    divisor_degree: float

    def green_value(self, p: str, q: str) -> float:
        self.graph.check_vertex(p)
        self.graph.check_vertex(q)
        i = self.graph.vertices.index(p)
        j = self.graph.vertices.index(q)
        return float(self.green[i, j])


def solve_admissible(
    graph: MetrizedGraph,
    divisor: GraphDivisor,
    h: RationalLike,
    tolerance: float | None = None,
) -> AdmissibleSolution:
    """Compute (mu, g, c, eps) on the mesh-h grid and verify the contract.

    When ``tolerance`` is given, the solve fails with
    :class:`ToleranceExceeded` if any of the mesh-limited residuals
    (laplacian, orthogonality, constancy) comes out larger: the residuals
    are the ground truth, not the construction.
    """
    deg = divisor.degree
    if deg == -2:
        raise DegenerateDivisor("divisor degree -2 admits no admissible pair")
    for v in divisor.coefficients:
        graph.check_vertex(v)

    disc = discretize(graph, h)
    n = disc.n
    n_vertices = len(graph.vertices)

    delta_d = np.zeros(n)
    for v, coeff in divisor.coefficients.items():
        delta_d[disc.vertex_index[v]] += float(coeff)
    mu = (delta_d + 2.0 * _canonical_measure_on(disc, h)) / float(deg + 2)

    solver = _GroundedSolver(disc)
    diag_j = solver.diagonal()
    j_mu = solver.column(mu)
    # F(y) = integral of r(y, .) d mu, via r(x,y) = J_xx + J_yy - 2 J_xy
    f_vec = diag_j + float(mu @ diag_j) - 2.0 * j_mu
    r_bar = float(mu @ f_vec)
    green_diag = f_vec - r_bar / 2.0

    # Green rows at the original vertices cover the divisor support.
    rows = np.empty((n_vertices, n))
    for s in range(n_vertices):
        e_s = np.zeros(n)
        e_s[s] = 1.0
        col = solver.column(e_s)
        r_row = diag_j[s] + diag_j - 2.0 * col
        rows[s] = 0.5 * (f_vec[s] + f_vec - r_row - r_bar)
    green = rows[:, :n_vertices]

    d_weights = delta_d[:n_vertices]
    g_d = d_weights @ rows  # g(D, y) over the grid
    phi = g_d + green_diag
    c = float(mu @ phi)
    g_dd = float(d_weights @ g_d[:n_vertices])
    eps = 2.0 * float(deg) * c - g_dd

    laplacian = disc.laplacian
    res_laplacian = 0.0
    for s in range(n_vertices):
        e_s = np.zeros(n)
        e_s[s] = 1.0
        res_laplacian = max(
            res_laplacian, float(np.abs(laplacian @ rows[s] - (e_s - mu)).max())
        )
    residuals = {
        "mass": abs(float(mu.sum()) - 1.0),
        "symmetry": float(np.abs(green - green.T).max()) if n_vertices else 0.0,
        "laplacian": res_laplacian,
        "orthogonality": float(np.abs(rows @ mu).max()),
        "constancy": float(np.abs(phi - c).max()),
    }
    if tolerance is not None:
        gated = {k: residuals[k] for k in ("laplacian", "orthogonality", "constancy")}
        worst = max(gated, key=gated.get)
        if gated[worst] > tolerance:
            raise ToleranceExceeded(
                f"residual {worst!r} = {gated[worst]:.3e} exceeds gate {tolerance:.3e}"
            )
    return AdmissibleSolution(
        graph=graph,
        h=disc.h,
        mu=mu,
        green=green,
        green_diag=green_diag,
        c=c,
        eps=eps,
        residuals=residuals,
        divisor_degree=float(deg),
    )


def eps_numeric(
    graph: MetrizedGraph,
    alpha: GenusWeighting,
    h: RationalLike,
    tolerance: float | None = None,
) -> float:
    """eps for the divisor D(alpha) induced by a vertex weighting."""
    divisor = divisor_of_weighting(graph, alpha)
    return solve_admissible(graph, divisor, h, tolerance=tolerance).eps
