"""Batch CLI: parse documents, dispatch to the engines, emit JSON reports.

Exact rationals are serialized as strings ("p/q" or "17"); floats appear
only in oracle output and display approximations, rounded to 15
significant digits.  Identical input bytes produce identical output
bytes.  Exit status: 0 on success, 1 on a domain error (with a
machine-readable error object on stdout), 2 on a parse/input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from . import cone as cone_mod
from . import oracle as oracle_mod
from .document import DocumentModel, parse_document
from .errors import AdmissibleError, OutsideExactClass, ParseError, SemanticError
from .exact import PolarizedGraph, EpsReport, eps_polarized, resistance_exact, tree_green
from .graph import MetrizedGraph
from .rational import format_rational, parse_rational


def _display_float(x: float) -> float:
    return float(f"{x:.15g}")


def _rat(value: Fraction) -> str:
    return format_rational(value)


def _load(path: str) -> DocumentModel:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def _expect_graph(doc: DocumentModel, command: str) -> MetrizedGraph:
    if doc.kind != "graph":
        raise AdmissibleError(f"{command} expects a graph document, got {doc.kind}")
    return doc.payload


def _as_fibration(doc: DocumentModel, command: str) -> bounds_mod.FibrationData:
    if doc.kind == "fibration":
        return doc.payload
    if doc.kind == "graph":
        graph = doc.payload
        return bounds_mod.FibrationData(
            graph.total_genus(), (bounds_mod.Fiber("graph", graph),)
        )
    raise AdmissibleError(f"{command} expects a fibration document, got {doc.kind}")


def _class_from_args(parts: list[str]) -> cone_mod.ModuliDivisorClass:
    """Accept either a class-document FILE or inline g=.. x=.. y=.. tokens."""
    if all("=" in part for part in parts):
        doc = parse_document("class " + " ".join(parts) + "\n")
    elif len(parts) == 1:
        doc = _load(parts[0])
    else:
        raise ParseError("expected a class file or g=/x=/y= arguments")
    if doc.kind != "class":
        raise AdmissibleError(f"expected a class document, got {doc.kind}")
    return doc.payload


def _eps_payload(report: EpsReport) -> dict:
    return {
        "eps": _rat(report.eps),
        "degree": _rat(report.degree),
        "per_edge": {str(i): _rat(t) for i, t in report.per_edge_terms.items()},
    }


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_eps(args) -> dict:
    doc = _load(args.file)
    if doc.kind == "graph":
        return _eps_payload(eps_polarized(PolarizedGraph.canonical(doc.payload)))
    if doc.kind == "fibration":
        data = doc.payload
        fibers = []
        total = Fraction(0)
        for fiber in data.fibers:
            try:
                report = eps_polarized(PolarizedGraph.canonical(fiber.graph))
            except OutsideExactClass as exc:
                raise OutsideExactClass(f"fiber {fiber.name!r}: {exc}") from exc
            total += report.eps
            fibers.append({"name": fiber.name, **_eps_payload(report)})
        return {"eps": _rat(total), "g": data.g, "fibers": fibers}
    raise AdmissibleError("eps expects a graph or fibration document")


def _cmd_green(args) -> dict:
    graph = _expect_graph(_load(args.file), "green")
    alpha = {v: graph.genus[v] for v in graph.vertices}
    if args.at is not None:
        return {"vertex": args.at, "green": _rat(tree_green(graph, alpha, args.at))}
    return {"green": {v: _rat(tree_green(graph, alpha, v)) for v in graph.vertices}}


def _cmd_oracle(args) -> dict:
    graph = _expect_graph(_load(args.file), "oracle")
    mesh = parse_rational(args.mesh)
    divisor = graph.canonical_polarization()
    solution = oracle_mod.solve_admissible(
        graph, divisor, mesh, tolerance=args.tolerance
    )
    vertices = graph.vertices
    return {
        "mesh": _rat(mesh),
        "degree": _rat(divisor.degree),
        "eps": _display_float(solution.eps),
        "c": _display_float(solution.c),
        "mu_total": _display_float(float(solution.mu.sum())),
        "green": {
            v: {w: _display_float(solution.green_value(v, w)) for w in vertices}
            for v in vertices
        },
        "residuals": {k: _display_float(v) for k, v in solution.residuals.items()},
    }


def _cmd_resistance(args) -> dict:
    graph = _expect_graph(_load(args.file), "resistance")
    if args.numeric:
        mesh = parse_rational(args.mesh)
        value = oracle_mod.resistance_numeric(graph, args.src, args.dst, mesh)
        return {
            "from": args.src,
            "to": args.dst,
            "resistance": _display_float(value),
            "method": "numeric",
            "mesh": _rat(mesh),
        }
    try:
        value = resistance_exact(graph, args.src, args.dst)
    except OutsideExactClass as exc:
        raise OutsideExactClass(f"{exc} (rerun with --numeric)") from exc
    return {
        "from": args.src,
        "to": args.dst,
        "resistance": _rat(value),
        "method": "exact",
    }


def _cmd_classify(args) -> dict:
    graph = _expect_graph(_load(args.file), "classify")
    edges = [
        {
            "id": i,
            "ends": [e.a, e.b],
            "length": _rat(e.length),
            "type": graph.classify_node(i),
        }
        for i, e in enumerate(graph.edges)
    ]
    return {
        "g": graph.total_genus(),
        "edges": edges,
        "deltas": list(graph.node_type_counts()),
    }


def _cmd_cone_check(args) -> dict:
    slack = cone_mod.cone_check(_class_from_args(args.cls))
    return {
        "member": slack.member,
        "slacks": [_rat(s) for s in slack.slacks],
    }


def _cmd_cone_decompose(args) -> dict:
    d = _class_from_args(args.cls)
    dec = cone_mod.wp_decomposition(d)
    return {
        "c_dist": _rat(dec.c_dist),
        "c_boundary": [_rat(c) for c in dec.c_boundary],
        "member": d.x >= 0 and dec.nonnegative,
    }


def _cmd_restrict(args) -> dict:
    restriction = cone_mod.hyperelliptic_restriction(_class_from_args(args.cls))
    return {
        "sigma": [_rat(c) for c in restriction.sigma],
        "delta": [_rat(c) for c in restriction.delta],
        "is_zero": restriction.is_zero,
    }


def _cmd_slope(args) -> dict:
    data = _as_fibration(_load(args.file), "slope")
    if data.deg_f_omega is None:
        raise AdmissibleError("slope needs a deg_f_omega statement in the document")
    deltas = bounds_mod.aggregate_deltas(data)
    holds, lhs, rhs = bounds_mod.slope_check(data.g, data.deg_f_omega, deltas)
    return {
        "holds": holds,
        "lhs": _rat(lhs),
        "rhs": _rat(rhs),
        "g": data.g,
        "deltas": list(deltas),
    }


def _cmd_bogomolov(args) -> dict:
    data = _as_fibration(_load(args.file), "bogomolov")
    report = bounds_mod.run_bounds(data)
    slope = None
    if report.slope_holds is not None:
        slope = {
            "holds": report.slope_holds,
            "lhs": _rat(report.slope_lhs),
            "rhs": _rat(report.slope_rhs),
        }
    return {
        "radius_sq": _rat(report.radius_sq),
        "radius": _display_float(report.radius),
        "g": report.g,
        "deltas": list(report.deltas),
        "slope": slope,
        "omega_sq_lower": _rat(report.omega_sq_lower),
        "eps_total": _rat(report.eps_total),
        "adm_lower": _rat(report.adm_lower),
        "unit_lengths": report.unit_lengths,
    }


def _cmd_theta(args) -> dict:
    witness = cone_mod.theta_witness(args.a1, args.a2)
    return {
        "a1": witness.a1,
        "a2": witness.a2,
        "degree": witness.degree,
        "coefficients": [_rat(c) for c in witness.coefficients],
        "monic": witness.monic,
        "theta_zero": _rat(witness.theta_zero),
        "derivative_matches": witness.derivative_matches,
        "theta_one": _rat(witness.theta_one),
        "theta_one_degree_scaled": _rat(witness.theta_one_degree_scaled),
    }


# ---------------------------------------------------------------------------
# wiring

def _table_lines(value, prefix: str) -> list[str]:
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            lines.extend(_table_lines(item, f"{prefix}.{key}" if prefix else str(key)))
        return lines
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return [f"{prefix}: {', '.join(str(v) for v in value)}"]
        lines = []
        for i, item in enumerate(value):
            lines.extend(_table_lines(item, f"{prefix}[{i}]"))
        return lines
    return [f"{prefix}: {value}"]


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "table":
        print("\n".join(_table_lines(payload, "")))
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def _error_payload(exc: AdmissibleError) -> dict:
    error = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("line", "column"):
        value = getattr(exc, attr, None)
        if value is not None:
            error[attr] = value
    return {"error": error}


def _rational_arg(text: str) -> str:
    try:
        parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="admissible",
        description="Admissible Green's functions, eps invariants, moduli "
        "divisor cones and effective Bogomolov radii.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    p = add("eps", _cmd_eps, "exact eps invariant with per-edge attribution")
    p.add_argument("file")

    p = add("green", _cmd_green, "exact Green value g(P,P) on a tree")
    p.add_argument("file")
    p.add_argument("--at", help="vertex id (default: all vertices)")

    p = add("oracle", _cmd_oracle, "numerical admissible solve with residuals")
    p.add_argument("file")
    p.add_argument("--mesh", type=_rational_arg, default="1/500", help="grid step, rational (default 1/500)")
    p.add_argument("--tolerance", type=float, default=1e-3, help="residual gate")

    p = add("resistance", _cmd_resistance, "effective resistance between vertices")
    p.add_argument("file")
    p.add_argument("--from", dest="src", required=True, metavar="P")
    p.add_argument("--to", dest="dst", required=True, metavar="Q")
    p.add_argument("--numeric", action="store_true", help="use the grid solver")
    p.add_argument("--mesh", type=_rational_arg, default="1/500")

    p = add("classify", _cmd_classify, "node types and delta counts")
    p.add_argument("file")

    for name, handler, help_text in (
        ("cone-check", _cmd_cone_check, "cone membership and slacks"),
        ("cone-decompose", _cmd_cone_decompose, "positive decomposition"),
        ("restrict-hyperelliptic", _cmd_restrict, "restriction to the hyperelliptic closure"),
    ):
        p = add(name, handler, help_text)
        p.add_argument("cls", nargs="+", metavar="CLASS", help="class file or g=/x=/y= tokens")

    p = add("slope", _cmd_slope, "slope inequality check")
    p.add_argument("file")

    p = add("bogomolov", _cmd_bogomolov, "effective Bogomolov radius pipeline")
    p.add_argument("file")

    p = add("theta", _cmd_theta, "ramification polynomial witness")
    p.add_argument("a1", type=_nonnegative_int)
    p.add_argument("a2", type=_nonnegative_int)
    return parser


def run_command(argv: list[str]) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "json")
    try:
        payload = args.handler(args)
    except (ParseError, SemanticError) as exc:
        _emit(_error_payload(exc), fmt)
        return 2
    except OSError as exc:
        _emit({"error": {"type": "IOError", "message": str(exc)}}, fmt)
        return 2
    except AdmissibleError as exc:
        _emit(_error_payload(exc), fmt)
        return 1
    _emit(payload, fmt)
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
