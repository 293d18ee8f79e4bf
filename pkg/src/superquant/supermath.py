"""Exact scalar helpers: rationals, generalized and super binomials, Upsilon and Xi.

Every scalar in the package is a :class:`fractions.Fraction`.  The integer
part ``[x]`` used throughout is ``floor(x)``, which coincides with the usual
bracket on the integer and half-integer arguments that actually occur.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` (int, ``"p/q"`` string or Fraction) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers); inverse of :func:`rational`."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def floor_half(m: int) -> int:
    """``[m/2]`` for an integer ``m``."""
    return m // 2


def super_binomial(j: int, i: int) -> Fraction:
    """Super binomial ``(j choose i)_s``.

    Equals ``([j/2] choose [i/2])`` when ``i`` is even or ``j`` is odd and
    vanishes otherwise.  Negative or out-of-range lower indices give 0.
    """
    if i < 0 or j < 0 or i > j:
        return Fraction(0)
    if i % 2 == 0 or j % 2 == 1:
        return Fraction(math.comb(j // 2, i // 2))
    return Fraction(0)


def gen_binomial(nu: RationalLike, q: int) -> Fraction:
    """Generalized binomial ``nu (nu-1) ... (nu-q+1) / q!`` for rational ``nu``."""
    if q < 0:
        return Fraction(0)
    nu = rational(nu)
    num = Fraction(1)
    for j in range(q):
        num *= nu - j
    return num / math.factorial(q)


def upsilon(lam: RationalLike, m: int) -> Fraction:
    """``1/2 ([m/2] + (1 - (-1)^m) lam)``."""
    lam = rational(lam)
    odd = m % 2
    return (Fraction(m // 2) + 2 * odd * lam) / 2


def xi(s: int, i: int, lam: RationalLike) -> Fraction:
    """``([s/2] choose [i/2]) * (2 lam + [(s-1)/2] choose [(2(s-i)+1+(-1)^i)/4])``."""
    lam = rational(lam)
    first = math.comb(s // 2, i // 2) if 0 <= i // 2 <= s // 2 else 0
    if first == 0:
        return Fraction(0)
    sign_i = 1 if i % 2 == 0 else -1
    lower = (2 * (s - i) + 1 + sign_i) // 4
    return first * gen_binomial(2 * lam + (s - 1) // 2, lower)
