from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_fraction(value: float | int | str | Fraction) -> Fraction:
    """Read a threshold as the exact decimal it was written as.

    Floats go through ``repr`` so ``0.4`` becomes ``2/5`` rather than the
    nearest binary double; this keeps ``>=`` boundaries stable.
    """
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def in_unit_interval(value: float | int | str | Fraction) -> Fraction:
    frac = as_fraction(value)
    if not 0 <= frac <= 1:
        raise ValueError(f"{value!r} outside [0, 1]")
    return frac
