"""Exception hierarchy shared by all engines.

Every error raised on a domain-level misuse derives from
:class:`AdmissibleError`, so callers (in particular the CLI) can map any
engine failure to a structured report instead of a traceback.
"""

from __future__ import annotations


class AdmissibleError(Exception):
    """Base class for all domain errors raised by this package."""


# ---------------------------------------------------------------------------
# graph construction and combinatorics

class DisconnectedGraph(AdmissibleError):
    """The metrized graph is not connected."""


class NonpositiveLength(AdmissibleError):
    """An edge length is zero or negative."""


class UnknownVertex(AdmissibleError):
    """An operation referenced a vertex id that is not in the graph."""


class UnknownEdge(AdmissibleError):
    """An operation referenced an edge id that is not in the graph."""


class ParameterOutOfRange(AdmissibleError):
    """A numeric parameter fell outside its admissible interval."""


# ---------------------------------------------------------------------------
# exact Green's-function engine

class DegenerateDivisor(AdmissibleError):
    """A divisor degree hit the excluded value -2 (no admissible pair)."""


class NotATree(AdmissibleError):
    """A tree-only formula was applied to a graph with a cycle."""


class DegenerateWeighting(AdmissibleError):
    """A vertex weighting is negative somewhere or sums to zero."""


class OutsideExactClass(AdmissibleError):
    """The graph has a block that is neither a bridge nor a self-loop,
    so no closed form applies; use the numerical oracle instead."""


class InvalidGenus(AdmissibleError):
    """A genus argument is out of range (g >= 2 required)."""


# ---------------------------------------------------------------------------
# numerical oracle

class SingularSolve(AdmissibleError):
    """The discretized Laplacian solve failed or produced non-finite values."""


class ToleranceExceeded(AdmissibleError):
    """Oracle property residuals exceeded the requested gate."""


# ---------------------------------------------------------------------------
# fibration bounds

class GenusMismatch(AdmissibleError):
    """A fiber's total genus disagrees with the family's genus."""


class SmoothFamily(AdmissibleError):
    """All delta counts vanish; the radius bound needs a singular fiber."""


class NonpositiveAdmissible(AdmissibleError):
    """The admissible self-intersection lower bound is not positive."""


# ---------------------------------------------------------------------------
# document format

class ParseError(AdmissibleError):
    """The document text does not match the line grammar."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class SemanticError(AdmissibleError):
    """The document parsed but is inconsistent (unknown vertex, bad arity...)."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line
