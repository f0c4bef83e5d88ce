"""Scalar values: exact rationals with a controlled escape hatch to decimals.

All series algebra in this package runs on ``fractions.Fraction``.  Decimals
(mpmath ``mpf``) enter only where the mathematics genuinely leaves the
rationals: root refinement and quadrature.  A ``Scalar`` is therefore either a
``Fraction`` (exact) or an ``mpf`` (correct to a stated number of digits).

The default working precision comes from the ``LARGEN_DIGITS`` environment
variable (30 when unset).
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import isqrt
from typing import Union

import mpmath

Scalar = Union[Fraction, mpmath.mpf]

DIGITS_ENV = "LARGEN_DIGITS"
DEFAULT_DIGITS = 30


def default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 5:
        raise ValueError(f"{DIGITS_ENV} must be at least 5, got {digits}")
    return digits


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def as_fraction(x) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction; reject floats (lossy)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot treat {type(x).__name__} as an exact rational")


def rationalize(x) -> Fraction:
    """The exact Fraction of a Scalar (every mpf is a binary rational)."""
    if is_exact(x):
        return as_fraction(x)
    p, q = mpmath.libmp.to_rational(x._mpf_)
    return Fraction(int(p), int(q))


def mpf_of(x, digits: int | None = None) -> mpmath.mpf:
    """Convert a Scalar to mpf at the given precision (plus small guard)."""
    digits = default_digits() if digits is None else digits
    with mpmath.workdps(digits + 5):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def sqrt_fraction_exact(q: Fraction):
    """Exact square root of a nonnegative Fraction, or None if irrational."""
    if q < 0:
        raise ValueError("negative radicand")
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_scalar(x, digits: int | None = None) -> Scalar:
    """Square root that stays exact when it can (perfect squares)."""
    if is_exact(x):
        q = as_fraction(x)
        root = sqrt_fraction_exact(q)
        if root is not None:
            return root
        digits = default_digits() if digits is None else digits
        with mpmath.workdps(digits + 5):
            return mpmath.sqrt(mpf_of(q, digits))
    with mpmath.workdps((default_digits() if digits is None else digits) + 5):
        return mpmath.sqrt(x)


def scalar_str(x, digits: int | None = None) -> str:
    """Deterministic rendering: exact rationals as p/q, decimals via nstr."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    digits = default_digits() if digits is None else digits
    return mpmath.nstr(x, digits)
