"""Conversion between user-facing numbers and exact rationals."""

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from numbers import Rational

__all__ = ["to_fraction", "is_inexact", "fmt_rational", "fmt_decimal"]


def to_fraction(value) -> Fraction:
    """Convert ``value`` to a :class:`~fractions.Fraction` without binary noise.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    Strings may be ``"p/q"`` or decimal notation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse number {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def is_inexact(value) -> bool:
    return isinstance(value, float)


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_decimal(x: Fraction, places: int = 6) -> str:
    """Round ``x`` half-to-even at ``places`` decimals, computed exactly."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 60 + len(str(abs(x.numerator)))
        d = Decimal(x.numerator) / Decimal(x.denominator)
        q = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    if q == 0:
        q = abs(q)
    return f"{q:.{places}f}"
