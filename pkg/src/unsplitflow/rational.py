"""Exact rational arithmetic helpers.

Every quantity in this package (flow values, demands, weights, costs,
discrepancies) is an exact rational.  ``fractions.Fraction`` already gives us
arbitrary precision, automatic reduction to lowest terms and a positive
denominator, so we only add parsing/rendering for the ``"p/q"`` wire format
used by the JSON files.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value) -> Fraction:
    """Parse a rational from JSON data: "p/q", "p", or a plain int."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise ValueError(f"cannot parse rational from {value!r}")


def render_rational(q: Fraction) -> str:
    """Render a rational bit-exactly: "p" for integers, "p/q" otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def common_denominator(values) -> int:
    """Least common multiple of the denominators of ``values`` (1 if empty)."""
    result = 1
    for v in values:
        result = lcm(result, Fraction(v).denominator)
    return result
