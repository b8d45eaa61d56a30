"""Exact-rational helpers shared by the certifiers and builders."""

from __future__ import annotations

import math
from fractions import Fraction


def exact_fraction(x) -> Fraction:
    """Convert a parameter to an exact Fraction.

    Floats are read at their shortest decimal representation (the literal a
    user typed, e.g. 0.2 -> 1/5), not their binary expansion; this keeps
    thresholds like ceil(eps * size) landing on the intended integer.
    Fractions, ints and strings ("2/7", "0.3") pass through exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def round_half_up(x: Fraction) -> int:
    """Round to nearest integer, ties upward."""
    return math.floor(x + Fraction(1, 2))
