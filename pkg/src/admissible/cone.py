"""Divisor classes x*lambda + sum y_i delta_i on the moduli of stable curves.

Everything here is exact linear algebra over the rationals: membership in
the cone of classes that are weakly positive (equivalently, nef) over the
open moduli locus, the extremal class saturating its boundary, positive
decompositions, the restriction to the hyperelliptic closure, and the
monic polynomial witnessing the ramification construction used to build
extremal test curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import InvalidGenus
from .rational import RationalLike, rational


@dataclass(frozen=True)
class ModuliDivisorClass:
    """The class x*lambda + sum_{i=0}^{floor(g/2)} y_i delta_i for genus g."""

    g: int
    x: Fraction
    y: tuple[Fraction, ...]

    def __post_init__(self):
        if self.g < 2:
            raise InvalidGenus(f"moduli divisor classes need g >= 2, got {self.g}")
        expected = self.g // 2 + 1
        if len(self.y) != expected:
            raise ValueError(
                f"expected {expected} boundary coefficients for g = {self.g}, "
                f"got {len(self.y)}"
            )


def divisor_class(
    g: int, x: RationalLike, y: Sequence[RationalLike]
) -> ModuliDivisorClass:
    return ModuliDivisorClass(g, rational(x), tuple(rational(c) for c in y))


@dataclass(frozen=True)
class ConeSlack:
    """Slacks of the three inequality families cutting out the cone.

    s_lambda = x, s_0 = g x + (8g+4) y_0, and for 1 <= i <= floor(g/2)
    s_i = i(g-i) x + (2g+1) y_i; the class is a member iff all are >= 0.
    """

    s_lambda: Fraction
    s_boundary: tuple[Fraction, ...]
    member: bool

    @property
    def slacks(self) -> tuple[Fraction, ...]:
        return (self.s_lambda,) + self.s_boundary


def distinguished_divisor(g: int) -> ModuliDivisorClass:
    """The extremal class (8g+4) lambda - g delta_0 - sum 4i(g-i) delta_i.

    It lies on the cone boundary: every boundary slack vanishes and only
    the lambda slack is positive.
    """
    if g < 2:
        raise InvalidGenus(f"distinguished divisor needs g >= 2, got {g}")
    y = [Fraction(-g)] + [Fraction(-4 * i * (g - i)) for i in range(1, g // 2 + 1)]
    return ModuliDivisorClass(g, Fraction(8 * g + 4), tuple(y))


def cone_check(d: ModuliDivisorClass) -> ConeSlack:
    """Membership in the weakly-positive (= nef over the smooth locus) cone."""
    g = d.g
    boundary = [g * d.x + (8 * g + 4) * d.y[0]]
    boundary += [
        i * (g - i) * d.x + (2 * g + 1) * d.y[i] for i in range(1, g // 2 + 1)
    ]
    member = d.x >= 0 and all(s >= 0 for s in boundary)
    return ConeSlack(d.x, tuple(boundary), member)


@dataclass(frozen=True)
class WpDecomposition:
    """D = c_dist * (distinguished divisor) + sum c_i delta_i, exactly."""

    c_dist: Fraction
    c_boundary: tuple[Fraction, ...]

    @property
    def nonnegative(self) -> bool:
        return self.c_dist >= 0 and all(c >= 0 for c in self.c_boundary)


def wp_decomposition(d: ModuliDivisorClass) -> WpDecomposition:
    """Write D as a combination of the distinguished divisor and the
    boundary classes:

        c_dist = x/(8g+4), c_0 = y_0 + g x/(8g+4),
        c_i = y_i + i(g-i) x/(2g+1).

    D is a cone member iff x >= 0 and every c_i >= 0.
    """
    g = d.g
    c_dist = d.x / (8 * g + 4)
    c = [d.y[0] + Fraction(g, 8 * g + 4) * d.x]
    c += [
        d.y[i] + Fraction(i * (g - i), 2 * g + 1) * d.x
        for i in range(1, g // 2 + 1)
    ]
    return WpDecomposition(c_dist, tuple(c))


def recompose(d: ModuliDivisorClass, dec: WpDecomposition) -> ModuliDivisorClass:
    """Reassemble the class from its decomposition (used to assert exactness)."""
    base = distinguished_divisor(d.g)
    y = tuple(
        dec.c_dist * base.y[i] + dec.c_boundary[i] for i in range(len(base.y))
    )
    return ModuliDivisorClass(d.g, dec.c_dist * base.x, y)


@dataclass(frozen=True)
class HyperellipticRestriction:
    """Coefficients of D restricted to the hyperelliptic closure.

    The basis is sigma_0..sigma_{floor((g-1)/2)} (components of the
    restricted delta_0) followed by delta_1..delta_{floor(g/2)}.
    """

    sigma: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.sigma + self.delta)


def hyperelliptic_restriction(d: ModuliDivisorClass) -> HyperellipticRestriction:
    """Restrict to the hyperelliptic closure via the classical relations

        delta_0 = sigma_0 + 2 (sigma_1 + ... ),
        (8g+4) lambda = g sigma_0 + sum 2(j+1)(g-j) sigma_j
                        + sum 4i(g-i) delta_i,

    giving sigma_0: g x/(8g+4) + y_0, sigma_j: 2((j+1)(g-j) x/(8g+4) + y_0)
    for j >= 1, and delta_i: i(g-i) x/(2g+1) + y_i.
    """
    g = d.g
    sigma = [Fraction(g, 8 * g + 4) * d.x + d.y[0]]
    sigma += [
        2 * (Fraction((j + 1) * (g - j), 8 * g + 4) * d.x + d.y[0])
        for j in range(1, (g - 1) // 2 + 1)
    ]
    delta = [
        Fraction(i * (g - i), 2 * g + 1) * d.x + d.y[i]
        for i in range(1, g // 2 + 1)
    ]
    return HyperellipticRestriction(tuple(sigma), tuple(delta))


# ---------------------------------------------------------------------------
# the ramification polynomial witness

@dataclass(frozen=True)
class ThetaWitness:
    """theta(x) = (a1+a2+1) * integral_0^x t^a1 (t-1)^a2 dt, exactly.

    ``coefficients`` lists rational coefficients by ascending degree.
    ``theta_one`` is the exact value theta(1) =
    (-1)^a2 a1! a2! / (a1+a2)!; ``theta_one_degree_scaled`` is that value
    multiplied by deg(theta) = a1+a2+1, a variant that circulates in the
    literature and differs from the integral whenever a1 + a2 >= 1.
    """

    a1: int
    a2: int
    coefficients: tuple[Fraction, ...]
    degree: int
    monic: bool
    theta_zero: Fraction
    derivative_matches: bool
    theta_one: Fraction
    theta_one_degree_scaled: Fraction


def _poly_eval(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(coefficients):
        result = result * x + c
    return result


def _poly_derivative(coefficients: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(k * c for k, c in enumerate(coefficients))[1:]


def theta_witness(a1: int, a2: int) -> ThetaWitness:
    """Expand theta and verify its defining identities with exact arithmetic.

    theta is monic of degree a1+a2+1, vanishes at 0 and its derivative is
    (a1+a2+1) x^a1 (x-1)^a2 coefficient by coefficient.
    """
    if a1 < 0 or a2 < 0:
        raise ValueError("theta witness needs nonnegative exponents")
    n = a1 + a2 + 1
    # t^a1 (t-1)^a2 expanded, then integrated term by term.
    integrand = [Fraction(0)] * n
    for k in range(a2 + 1):
        integrand[a1 + k] = Fraction((-1) ** (a2 - k) * comb(a2, k))
    coefficients = [Fraction(0)] * (n + 1)
    for power, c in enumerate(integrand):
        coefficients[power + 1] = n * c / (power + 1)

    expected_derivative = tuple(n * c for c in integrand)
    theta_one = _poly_eval(coefficients, Fraction(1))
    assert theta_one == Fraction(
        (-1) ** a2 * factorial(a1) * factorial(a2), factorial(a1 + a2)
    )
    return ThetaWitness(
        a1=a1,
        a2=a2,
        coefficients=tuple(coefficients),
        degree=n,
        monic=coefficients[n] == 1,
        theta_zero=_poly_eval(coefficients, Fraction(0)),
        derivative_matches=_poly_derivative(coefficients) == expected_derivative,
        theta_one=theta_one,
        theta_one_degree_scaled=n * theta_one,
    )
