"""Numeric model shared by every solver component.

All correctness-critical code works on exact rationals (``fractions.Fraction``)
so that comparisons between candidate cost values are exact set-membership
claims, never epsilon tests.  A parallel fast mode uses plain ``float`` for
benchmarking only; the algorithms are written generically over both.

Infinity is the single module-level sentinel ``INF``.  It mixes with Fraction,
int and float through reflected operators, so ``min(x, INF)`` and
``INF - d`` behave as expected in either numeric mode.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    """Positive infinity compatible with Fraction/int/float comparisons."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "inf"

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is INF

    def __gt__(self, other) -> bool:
        return other is not INF

    def __ge__(self, other) -> bool:
        return True

    def __eq__(self, other) -> bool:
        return other is INF

    def __ne__(self, other) -> bool:
        return other is not INF

    def __hash__(self) -> int:
        return hash(float("inf"))

    def __add__(self, other):
        return INF

    __radd__ = __add__

    def __sub__(self, other):
        if other is INF:
            raise ArithmeticError("inf - inf is undefined")
        return INF

    def __rsub__(self, other):
        raise ArithmeticError("finite - inf is not representable")

    def __mul__(self, other):
        if other is INF:
            return INF
        if other == 0:
            raise ArithmeticError("inf * 0 is undefined")
        if other < 0:
            raise ArithmeticError("negative infinity is not representable")
        return INF

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other is INF:
            raise ArithmeticError("inf / inf is undefined")
        if other < 0:
            raise ArithmeticError("negative infinity is not representable")
        return INF

    def __rtruediv__(self, other):
        raise ArithmeticError("finite / inf is not used")


INF = _Infinity()

#: Finite scalar in exact mode is Fraction (ints accepted as inputs);
#: in fast mode it is float.  Extended scalars additionally allow INF.
Scalar = Union[int, Fraction, float]


def is_inf(x) -> bool:
    return x is INF


def parse_scalar(text, fast: bool = False) -> Scalar:
    """Parse an int, decimal string ("2.5") or fraction string ("5/2")."""
    if isinstance(text, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(text, (int, Fraction)):
        value = Fraction(text)
    elif isinstance(text, float):
        value = Fraction(text)
    elif isinstance(text, str):
        value = Fraction(text)
    else:
        raise ValueError(f"cannot parse scalar from {text!r}")
    return float(value) if fast else value


def div_or_inf(num, den):
    """num / den with the zero-denominator convention den == 0 -> INF."""
    if den == 0:
        return INF
    return num / den


def midpoint(lo, hi):
    return (lo + hi) / 2


def as_fraction_str(x) -> str:
    """Render an exact value as "p/q" (always with an explicit denominator)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def decimal_str(x) -> str:
    """Canonical decimal string for a scalar whose denominator is 2^a * 5^b.

    Values produced by parsing decimal inputs always satisfy this.  Integers
    render without a decimal point.
    """
    f = Fraction(x)
    num, den = f.numerator, f.denominator
    if den == 1:
        return str(num)
    shift = 0
    d = den
    while d % 2 == 0:
        d //= 2
        shift += 1
    fives = 0
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        # Not decimal-representable; fall back to the fraction form.
        return f"{num}/{den}"
    digits = max(shift, fives)
    scaled = num * 10**digits // den
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    frac_str = str(frac).rjust(digits, "0").rstrip("0")
    if not frac_str:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac_str}"
