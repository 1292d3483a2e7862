"""Admissible Green's functions and eps invariants on metrized graphs,
divisor cones on the moduli of stable curves, and effective Bogomolov
radii, with an exact rational engine and an independent numerical oracle.
"""

from .bounds import (
    BoundReport,
    Fiber,
    FibrationData,
    admissible_omega_sq_lower,
    aggregate_deltas,
    bogomolov_radius,
    eps_total,
    noether_omega_sq,
    omega_sq_lower,
    radius_from_admissible,
    run_bounds,
    slope_check,
)
from .cone import (
    ConeSlack,
    HyperellipticRestriction,
    ModuliDivisorClass,
    ThetaWitness,
    WpDecomposition,
    cone_check,
    distinguished_divisor,
    divisor_class,
    hyperelliptic_restriction,
    recompose,
    theta_witness,
    wp_decomposition,
)
from .document import DocumentModel, parse_document, serialize_document
from .exact import (
    EpsReport,
    PolarizedGraph,
    attach_circle_eps,
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
from .graph import (
    Edge,
    GraphDivisor,
    MetrizedGraph,
    build_graph,
    divisor_of_weighting,
)
from .oracle import (
    AdmissibleSolution,
    DiscretizedGraph,
    canonical_measure,
    discretize,
    eps_numeric,
    resistance_numeric,
    solve_admissible,
)
from .rational import Rational, format_rational, parse_rational, rational

__version__ = "0.1.0"

__all__ = [
    "AdmissibleSolution",
    "BoundReport",
    "ConeSlack",
    "DiscretizedGraph",
    "DocumentModel",
    "Edge",
    "EpsReport",
    "Fiber",
    "FibrationData",
    "GraphDivisor",
    "HyperellipticRestriction",
    "MetrizedGraph",
    "ModuliDivisorClass",
    "PolarizedGraph",
    "Rational",
    "ThetaWitness",
    "WpDecomposition",
    "admissible_omega_sq_lower",
    "aggregate_deltas",
    "attach_circle_eps",
    "bogomolov_radius",
    "build_graph",
    "canonical_measure",
    "circle_green",
    "cone_check",
    "discretize",
    "distinguished_divisor",
    "divisor_class",
    "divisor_of_weighting",
    "eps_chain",
    "eps_numeric",
    "eps_polarized",
    "eps_segment",
    "eps_total",
    "format_rational",
    "hyperelliptic_restriction",
    "join_eps",
    "join_green",
    "noether_omega_sq",
    "omega_sq_lower",
    "parse_document",
    "parse_rational",
    "radius_from_admissible",
    "rational",
    "recompose",
    "resistance_exact",
    "resistance_numeric",
    "run_bounds",
    "serialize_document",
    "slope_check",
    "solve_admissible",
    "theta_witness",
    "tree_eps",
    "tree_green",
    "wp_decomposition",
]
