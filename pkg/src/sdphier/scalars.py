"""Scalar plumbing: exact rationals and high-precision binary floats.

Two scalar modes run through the whole package.  Structural analysis is
done in exact rationals (fractions.Fraction).  Feasibility verification is
done in mpmath floats carrying a 256-bit mantissa, because the magnitudes
involved are doubly exponential in the number of variables and overflow
IEEE doubles almost immediately.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ParseError

# Mantissa width for all high-precision float work (well above the
# 237-bit floor needed to separate the verification tolerances).
PRECISION_BITS = 256

# Default relative tolerance of the definiteness classifier.
DEFINITENESS_TOL = Fraction(1, 2**64)

RATIONAL = "rational"
FLOAT = "float"


def workprec():
    """Context manager setting mpmath to the package working precision."""
    return mp.workprec(PRECISION_BITS)


def to_mpf(value) -> mpmath.mpf:
    """Convert an int, Fraction, float or mpf to an mpf at working precision."""
    if isinstance(value, mpmath.mpf):
        return value
    with workprec():
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / mp.mpf(value.denominator)
        return mp.mpf(value)


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a binary float (mpf or Python float)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        if exp != 0:  # inf or nan encode with man == 0, exp != 0 markers
            raise ValueError("cannot convert non-finite float to Fraction")
        return Fraction(0)
    mag = Fraction(man) * Fraction(2) ** exp
    return -mag if sign else mag


def parse_rational(text) -> Fraction:
    """Parse "p" or "p/q" into a Fraction; plain ints are accepted too."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected rational string, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}: {exc}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical "p" / "p/q" form, q > 0 and gcd(p, q) = 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_mpf(x, digits: int = 40) -> str:
    """Decimal string with the given number of significant digits."""
    with workprec():
        return mpmath.nstr(to_mpf(x), digits, strip_zeros=False)
