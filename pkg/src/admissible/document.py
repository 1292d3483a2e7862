"""Line-oriented document format for graphs, fibrations and divisor classes.

Grammar (one statement per line, ``#`` starts a comment, blank lines are
ignored; rationals are written ``p/q`` or as plain integers)::

    genus N                     # fibration genus
    fiber name=<id>             # opens a fiber block
    vertex <id> [genus=<n>]     # genus defaults to 0
    edge <idA> <idB> [length=<p/q>]   # length defaults to 1
    loop <id> [length=<p/q>]
    deg_f_omega <p/q>
    omega_sq <p/q>
    class g=<n> x=<p/q> y=<p/q>,<p/q>,...

A document containing a ``class`` statement describes a moduli divisor
class; one containing ``genus``/``fiber``/``deg_f_omega``/``omega_sq``
describes a fibration; otherwise it describes a single metrized graph.
``parse_document`` and ``serialize_document`` round-trip: serializing a
model and parsing the result yields an equal model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .bounds import Fiber, FibrationData
from .cone import ModuliDivisorClass, divisor_class
from .errors import AdmissibleError, ParseError, SemanticError
from .graph import MetrizedGraph, build_graph
from .rational import format_rational, parse_rational

_ID = re.compile(r"[A-Za-z0-9_.\-]+\Z")

Payload = MetrizedGraph | FibrationData | ModuliDivisorClass


@dataclass(frozen=True)
class DocumentModel:
    """A parsed document: its kind and the corresponding engine payload.

    ``positions`` maps entities ("vertex:v1", "fiber:y1", "genus", ...) to
    the 1-based source line they came from; it is excluded from equality
    so that round-trips compare structurally.
    """

    kind: str
    payload: Payload
    positions: Mapping[str, int] = field(default_factory=dict, compare=False, repr=False)


# ---------------------------------------------------------------------------
# parsing

def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} expects an integer, got {token!r}", line) from None


def _parse_rat(token: str, line: int, what: str) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError:
        raise ParseError(f"{what} expects a rational p/q, got {token!r}", line) from None


def _parse_id(token: str, line: int, what: str) -> str:
    if not _ID.match(token):
        raise ParseError(
            f"{what} must match [A-Za-z0-9_.-]+, got {token!r}", line
        )
    return token


def _keyvals(tokens: list[str], line: int, allowed: dict[str, bool]) -> dict[str, str]:
    """Parse ``key=value`` tokens; ``allowed`` maps key -> required."""
    out: dict[str, str] = {}
    for token in tokens:
        key, eq, value = token.partition("=")
        if not eq or key not in allowed:
            raise ParseError(f"expected {'/'.join(allowed)}=<value>, got {token!r}", line)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", line)
        out[key] = value
    for key, required in allowed.items():
        if required and key not in out:
            raise ParseError(f"missing required key {key!r}", line)
    return out


class _FiberBlock:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.vertices: list[tuple[str, int]] = []
        self.edges: list[tuple[str, str, Fraction]] = []
        self.vertex_lines: dict[str, int] = {}
        self.edge_lines: list[int] = []


def _build_graph_block(block: _FiberBlock) -> MetrizedGraph:
    declared = {v for v, _ in block.vertices}
    for (a, b, length), line in zip(block.edges, block.edge_lines):
        for end in (a, b):
            if end not in declared:
                raise SemanticError(f"unknown vertex {end!r}", line)
        if length <= 0:
            raise SemanticError(f"edge length {length} must be positive", line)
    try:
        return build_graph(block.vertices, block.edges)
    except AdmissibleError as exc:
        raise SemanticError(str(exc), block.line) from exc


def parse_document(text: str) -> DocumentModel:
    """Parse a document; raises :class:`ParseError` on grammar violations
    and :class:`SemanticError` on inconsistencies, both carrying the line."""
    top = _FiberBlock("", 0)
    fibers: list[_FiberBlock] = []
    current = top
    positions: dict[str, int] = {}
    genus_line = None
    fibration_keys: dict[str, tuple[Fraction, int]] = {}
    class_parts: tuple[int, Fraction, tuple[Fraction, ...], int] | None = None
    saw_fibration = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0], tokens[1:]

        if keyword == "genus":
            if len(args) != 1:
                raise ParseError("usage: genus N", lineno)
            if genus_line is not None:
                raise SemanticError("genus already declared", lineno)
            genus_line = (_parse_int(args[0], lineno, "genus"), lineno)
            positions["genus"] = lineno
            saw_fibration = True
        elif keyword == "fiber":
            kv = _keyvals(args, lineno, {"name": True})
            name = _parse_id(kv["name"], lineno, "fiber name")
            if any(f.name == name for f in fibers):
                raise SemanticError(f"duplicate fiber name {name!r}", lineno)
            current = _FiberBlock(name, lineno)
            fibers.append(current)
            positions[f"fiber:{name}"] = lineno
            saw_fibration = True
        elif keyword == "vertex":
            if not args:
                raise ParseError("usage: vertex <id> [genus=<n>]", lineno)
            vid = _parse_id(args[0], lineno, "vertex id")
            kv = _keyvals(args[1:], lineno, {"genus": False})
            g = _parse_int(kv["genus"], lineno, "vertex genus") if "genus" in kv else 0
            if g < 0:
                raise SemanticError(f"vertex genus must be >= 0, got {g}", lineno)
            if vid in current.vertex_lines:
                raise SemanticError(f"duplicate vertex {vid!r}", lineno)
            current.vertices.append((vid, g))
            current.vertex_lines[vid] = lineno
            positions[f"vertex:{current.name}:{vid}" if current.name else f"vertex:{vid}"] = lineno
        elif keyword in ("edge", "loop"):
            want = 2 if keyword == "edge" else 1
            if len(args) < want:
                raise ParseError(f"usage: {keyword} <id>{' <id>' * (want - 1)} [length=<p/q>]", lineno)
            ends = [_parse_id(t, lineno, "edge endpoint") for t in args[:want]]
            kv = _keyvals(args[want:], lineno, {"length": False})
            length = (
                _parse_rat(kv["length"], lineno, "length")
                if "length" in kv
                else Fraction(1)
            )
            a, b = (ends[0], ends[1]) if keyword == "edge" else (ends[0], ends[0])
            current.edges.append((a, b, length))
            current.edge_lines.append(lineno)
        elif keyword in ("deg_f_omega", "omega_sq"):
            if len(args) != 1:
                raise ParseError(f"usage: {keyword} <p/q>", lineno)
            if keyword in fibration_keys:
                raise SemanticError(f"{keyword} already declared", lineno)
            fibration_keys[keyword] = (_parse_rat(args[0], lineno, keyword), lineno)
            positions[keyword] = lineno
            saw_fibration = True
        elif keyword == "class":
            if class_parts is not None:
                raise SemanticError("class already declared", lineno)
            kv = _keyvals(args, lineno, {"g": True, "x": True, "y": True})
            g = _parse_int(kv["g"], lineno, "class genus")
            x = _parse_rat(kv["x"], lineno, "class x")
            y = tuple(
                _parse_rat(part, lineno, "class y entry")
                for part in kv["y"].split(",")
            )
            class_parts = (g, x, y, lineno)
            positions["class"] = lineno
        else:
            raise ParseError(f"unknown statement {keyword!r}", lineno)

    if class_parts is not None:
        if saw_fibration or top.vertices or fibers:
            raise SemanticError("a class document admits no other statements", class_parts[3])
        g, x, y, lineno = class_parts
        try:
            payload = divisor_class(g, x, y)
        except (AdmissibleError, ValueError) as exc:
            raise SemanticError(str(exc), lineno) from exc
        return DocumentModel("class", payload, positions)

    if saw_fibration:
        if top.vertices or top.edges:
            line = top.edge_lines[0] if top.edges else next(iter(top.vertex_lines.values()))
            raise SemanticError("vertices and edges must appear inside a fiber block", line)
        if genus_line is None:
            raise SemanticError("fibration documents must declare a genus", 1)
        g, gline = genus_line
        if g < 2:
            raise SemanticError(f"fibration genus must be >= 2, got {g}", gline)
        built = []
        for block in fibers:
            graph = _build_graph_block(block)
            if graph.total_genus() != g:
                raise SemanticError(
                    f"fiber {block.name!r} has total genus {graph.total_genus()}, "
                    f"declared genus is {g}",
                    block.line,
                )
            built.append(Fiber(block.name, graph))
        payload = FibrationData(
            g,
            tuple(built),
            deg_f_omega=fibration_keys.get("deg_f_omega", (None, 0))[0],
            omega_sq=fibration_keys.get("omega_sq", (None, 0))[0],
        )
        return DocumentModel("fibration", payload, positions)

    if not top.vertices:
        raise SemanticError("document declares no vertices", 1)
    return DocumentModel("graph", _build_graph_block(top), positions)


# ---------------------------------------------------------------------------
# serialization

def _graph_lines(graph: MetrizedGraph) -> list[str]:
    lines = [f"vertex {v} genus={graph.genus[v]}" for v in graph.vertices]
    for e in graph.edges:
        if e.is_loop:
            lines.append(f"loop {e.a} length={format_rational(e.length)}")
        else:
            lines.append(f"edge {e.a} {e.b} length={format_rational(e.length)}")
    return lines


def serialize_document(model: DocumentModel) -> str:
    """Canonical text for a model; parsing it back yields an equal model."""
    if model.kind == "class":
        d = model.payload
        y = ",".join(format_rational(c) for c in d.y)
        return f"class g={d.g} x={format_rational(d.x)} y={y}\n"
    if model.kind == "graph":
        return "\n".join(_graph_lines(model.payload)) + "\n"
    if model.kind == "fibration":
        data = model.payload
        lines = [f"genus {data.g}"]
        if data.deg_f_omega is not None:
            lines.append(f"deg_f_omega {format_rational(data.deg_f_omega)}")
        if data.omega_sq is not None:
            lines.append(f"omega_sq {format_rational(data.omega_sq)}")
        for fiber in data.fibers:
            lines.append(f"fiber name={fiber.name}")
            lines.extend(_graph_lines(fiber.graph))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown document kind {model.kind!r}")
