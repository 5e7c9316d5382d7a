"""Exact integer and rational helpers shared by the counting code."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

# Denominators past this size make the rational exponent path impractical.
SMALL_RATIONAL = 1000


def to_fraction(value) -> Fraction:
    """Convert a number or literal to an exact Fraction.

    Floats are read through their shortest decimal repr, so ``0.7`` becomes
    ``7/10`` rather than the binary neighbour of 0.7.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def iroot(x: int, k: int) -> int:
    """Largest integer r with r**k <= x, for x >= 0 and k >= 1."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if k == 1 or x < 2:
        return x
    if k == 2:
        return math.isqrt(x)
    if x.bit_length() < 1000:
        r = int(math.exp(math.log(x) / k) * (1 + 1e-9)) + 2
    else:
        r = 1 << (x.bit_length() // k + 1)
    # Newton from above converges monotonically once r >= true root.
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def floor_rational_power(x: int, e: Fraction) -> int:
    """floor(x**e) for a positive integer x and a non-negative rational e."""
    if e < 0:
        raise ValueError("negative exponent")
    return iroot(x ** e.numerator, e.denominator)


def lcm_of_denominators(values, max_bits: int | None = None) -> int | None:
    """Least common denominator; ``None`` once it outgrows ``max_bits``."""
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
        if max_bits is not None and d.bit_length() > max_bits:
            return None
    return d
