"""Quantitative bounds for semistable fibered surfaces.

Given the dual graphs of the singular fibers of a genus-g semistable
fibration, this module aggregates node-type counts, checks the slope
inequality, derives the lower bound for the relative dualizing
self-intersection, subtracts the eps invariants to reach the admissible
pairing, and evaluates the effective Bogomolov radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    GenusMismatch,
    InvalidGenus,
    NonpositiveAdmissible,
    OutsideExactClass,
    SmoothFamily,
)
from .exact import PolarizedGraph, eps_polarized
from .graph import MetrizedGraph


@dataclass(frozen=True)
class Fiber:
    """A named singular fiber, represented by its dual graph."""

    name: str
    graph: MetrizedGraph


@dataclass(frozen=True)
class FibrationData:
    """Inputs for the bound pipeline.

    ``deg_f_omega`` (the degree of the pushforward of the relative
    dualizing sheaf) and ``omega_sq`` (its self-intersection) are optional
    refinements; when ``omega_sq`` is supplied it replaces the slope-derived
    lower bound in the admissible pairing.
    """

    g: int
    fibers: tuple[Fiber, ...]
    deg_f_omega: Fraction | None = None
    omega_sq: Fraction | None = None

    def __post_init__(self):
        if self.g < 2:
            raise InvalidGenus(f"fibration genus must be >= 2, got {self.g}")


@dataclass(frozen=True)
class BoundReport:
    """Everything the radius computation produced, exactly.

    ``radius`` is a display approximation; ``radius_sq`` is authoritative.
    ``unit_lengths`` records whether every node has length 1, the setting
    in which the delta-count closed forms apply verbatim.
    """

    g: int
    deltas: tuple[int, ...]
    slope_holds: bool | None
    slope_lhs: Fraction | None
    slope_rhs: Fraction | None
    omega_sq_lower: Fraction
    eps_total: Fraction
    adm_lower: Fraction
    radius_sq: Fraction
    radius: float
    unit_lengths: bool


def aggregate_deltas(data: FibrationData) -> tuple[int, ...]:
    """Componentwise sum of node-type counts over all fibers."""
    totals = [0] * (data.g // 2 + 1)
    for fiber in data.fibers:
        fiber_genus = fiber.graph.total_genus()
        if fiber_genus != data.g:
            raise GenusMismatch(
                f"fiber {fiber.name!r} has total genus {fiber_genus}, "
                f"expected {data.g}"
            )
        for i, count in enumerate(fiber.graph.node_type_counts()):
            totals[i] += count
    return tuple(totals)


def slope_check(
    g: int, deg_f_omega: Fraction, deltas: Sequence[int]
) -> tuple[bool, Fraction, Fraction]:
    """The slope inequality (8g+4) deg f_* omega >= g delta_0 + sum 4i(g-i) delta_i.

    Returns (holds, lhs, rhs).  A violation flags input data that cannot
    come from an actual semistable family.
    """
    if g < 2:
        raise InvalidGenus(f"slope inequality needs g >= 2, got {g}")
    lhs = (8 * g + 4) * Fraction(deg_f_omega)
    rhs = g * Fraction(deltas[0])
    for i in range(1, len(deltas)):
        rhs += 4 * i * (g - i) * Fraction(deltas[i])
    return lhs >= rhs, lhs, rhs


def noether_omega_sq(
    g: int, deg_f_omega: Fraction, delta_total: Fraction
) -> Fraction:
    """Relative dualizing self-intersection via the Noether formula:
    omega^2 = 12 deg f_* omega - delta_total."""
    return 12 * Fraction(deg_f_omega) - Fraction(delta_total)


def omega_sq_lower(g: int, deltas: Sequence[int]) -> Fraction:
    """Lower bound for omega^2 implied by the slope inequality and the
    Noether formula:

        (g-1)/(2g+1) delta_0 + sum (12i(g-i)/(2g+1) - 1) delta_i.
    """
    if g < 2:
        raise InvalidGenus(f"omega^2 lower bound needs g >= 2, got {g}")
    result = Fraction(g - 1, 2 * g + 1) * deltas[0]
    for i in range(1, len(deltas)):
        result += (Fraction(12 * i * (g - i), 2 * g + 1) - 1) * deltas[i]
    return result


def eps_total(data: FibrationData) -> Fraction:
    """Sum of eps(G_y, omega_y) over the singular fibers.

    Every fiber must be a tree of stable components; otherwise there is
    no closed form and the offending fiber is named in the error.
    """
    total = Fraction(0)
    for fiber in data.fibers:
        try:
            total += eps_polarized(PolarizedGraph.canonical(fiber.graph)).eps
        except OutsideExactClass as exc:
            raise OutsideExactClass(
                f"fiber {fiber.name!r} is not a tree of stable components: {exc}"
            ) from exc
    return total


def admissible_omega_sq_lower(
    omega_sq_bound: Fraction, eps_sum: Fraction
) -> Fraction:
    """Lower bound for the admissible self-pairing: omega^2 bound minus
    the total eps correction."""
    return Fraction(omega_sq_bound) - Fraction(eps_sum)


def bogomolov_radius(g: int, deltas: Sequence[int]) -> tuple[Fraction, float]:
    """The effective Bogomolov radius for a non-smooth family:

        radius^2 = (g-1)^2/(g(2g+1)) ((g-1)/3 delta_0 + sum 4i(g-i) delta_i).

    Returns (radius_sq, radius) with the square exact and the root a
    display approximation.
    """
    if g < 2:
        raise InvalidGenus(f"radius bound needs g >= 2, got {g}")
    if all(d == 0 for d in deltas):
        raise SmoothFamily("all delta counts vanish; the family is smooth")
    inner = Fraction(g - 1, 3) * deltas[0]
    for i in range(1, len(deltas)):
        inner += 4 * i * (g - i) * Fraction(deltas[i])
    radius_sq = Fraction((g - 1) ** 2, g * (2 * g + 1)) * inner
    return radius_sq, math.sqrt(radius_sq)


def radius_from_admissible(g: int, adm: Fraction) -> tuple[Fraction, float]:
    """Radius from an admissible self-pairing bound: radius^2 = (g-1) adm,
    valid only when adm > 0."""
    if g < 2:
        raise InvalidGenus(f"radius bound needs g >= 2, got {g}")
    adm = Fraction(adm)
    if adm <= 0:
        raise NonpositiveAdmissible(
            f"admissible pairing bound must be positive, got {adm}"
        )
    radius_sq = (g - 1) * adm
    return radius_sq, math.sqrt(radius_sq)


def run_bounds(data: FibrationData) -> BoundReport:
    """The full pipeline: delta counts, slope check (when deg f_* omega is
    known), omega^2 lower bound, eps total, admissible bound and radius.

    A user-supplied omega^2 replaces the slope-derived lower bound in the
    admissible pairing, sharpening the radius.
    """
    deltas = aggregate_deltas(data)
    if all(d == 0 for d in deltas):
        raise SmoothFamily("no singular fiber; the radius bound requires one")

    slope_holds = slope_lhs = slope_rhs = None
    if data.deg_f_omega is not None:
        slope_holds, slope_lhs, slope_rhs = slope_check(
            data.g, data.deg_f_omega, deltas
        )

    lower = omega_sq_lower(data.g, deltas)
    eps_sum = eps_total(data)
    base = data.omega_sq if data.omega_sq is not None else lower
    adm = admissible_omega_sq_lower(base, eps_sum)
    radius_sq, radius = radius_from_admissible(data.g, adm)

    unit_lengths = all(
        e.length == 1 for fiber in data.fibers for e in fiber.graph.edges
    )
    return BoundReport(
        g=data.g,
        deltas=deltas,
        slope_holds=slope_holds,
        slope_lhs=slope_lhs,
        slope_rhs=slope_rhs,
        omega_sq_lower=lower,
        eps_total=eps_sum,
        adm_lower=adm,
        radius_sq=radius_sq,
        radius=radius,
        unit_lengths=unit_lengths,
    )
