"""Exact rationals with total division (an involutive meadow).

Values are plain :class:`fractions.Fraction` instances, which are already kept
in canonical form (positive denominator, reduced).  What this module adds is
the meadow signature on top of them: an inverse with ``inv(0) == 0``, a total
``div``, the sign function and the three-place conditional ``x <| y |> z``.

Ordinary ``/`` on fractions still raises on a zero divisor; code in this
package uses :func:`div` wherever a denominator may vanish.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

MeadowValue = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"\s*([+-]?)(?:(\d+)\s*/\s*(\d+)|(\d+)(?:\.(\d+))?|\.(\d+))\s*\Z")

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalSyntaxError(ValueError):
    """Raised for text that is not a ``p/q``, integer or finite decimal literal."""

    def __init__(self, text: str):
        super().__init__(f"not an exact rational literal: {text!r}")
        self.text = text


def parse(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal such as ``"0.8"``.

    Decimals are read exactly: ``parse("0.8") == Fraction(4, 5)``.  A zero
    denominator is rejected as a syntax error rather than silently read as 0.
    """
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise RationalSyntaxError(text)
    sign, num, den, whole, frac, bare_frac = m.groups()
    if num is not None:
        if int(den) == 0:
            raise RationalSyntaxError(text)
        value = Fraction(int(num), int(den))
    elif whole is not None:
        value = Fraction(whole + "." + frac) if frac else Fraction(int(whole))
    else:
        value = Fraction("0." + bare_frac)
    return -value if sign == "-" else value


def mv(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction or literal string to a meadow value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not meadow values")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational; floats are not accepted")


def render(x: Fraction) -> str:
    """Lowest-terms text, integers without ``/1``."""
    x = mv(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def inv(x: RationalLike) -> Fraction:
    x = mv(x)
    if x == 0:
        return ZERO
    return 1 / x


def div(x: RationalLike, y: RationalLike) -> Fraction:
    """Total division: ``x * inv(y)``, so that ``div(x, 0) == 0``."""
    return mv(x) * inv(y)


def sign(x: RationalLike) -> Fraction:
    x = mv(x)
    if x > 0:
        return ONE
    if x < 0:
        return -ONE
    return ZERO


def cond(x: RationalLike, y: RationalLike, z: RationalLike) -> Fraction:
    """The conditional ``x <| y |> z``: x if y != 0 else z.

    Computed from the defining equation ``(y/y)*x + (1 - y/y)*z``.
    """
    y_over_y = div(y, y)
    return y_over_y * mv(x) + (1 - y_over_y) * mv(z)
