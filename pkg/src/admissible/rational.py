"""Exact rational scalars.

The whole exact engine runs on :class:`fractions.Fraction`: arbitrary
precision, always in lowest terms with positive denominator.  This module
only adds the parsing/formatting conventions used by the document format
and the JSON reports ("p/q", or a bare integer when the denominator is 1).
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

RationalLike = Fraction | int | str


def rational(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to an exact Fraction.

    Floats are deliberately rejected: they would smuggle rounding into the
    exact engine.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (optionally signed) into a Fraction."""
    body = text.strip()
    num, slash, den = body.partition("/")
    try:
        if slash:
            return Fraction(int(num), int(den))
        return Fraction(int(body))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical text form: "p/q", or just "p" when q == 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
