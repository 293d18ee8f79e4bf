"""Superfunctions ``f0(x) + theta*f1(x)`` on S^{1|1} with polynomial components.

Polynomials are dense tuples of Fractions, lowest degree first, with trailing
zeros stripped (the zero polynomial is ``()``).  Everything here is an
immutable value.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Sequence

from .supermath import RationalLike, format_rational, rational

Poly = tuple  # tuple[Fraction, ...]

_ZERO = Fraction(0)


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):  # type: ignore[override]
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__


class InhomogeneousError(ValueError):
    """An operation needing a definite parity got a mixed superfunction."""


# -- dense polynomial helpers -------------------------------------------------

def _trim(coeffs: Iterable) -> Poly:
    c = [v if type(v) is Fraction else Fraction(v) for v in coeffs]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _strip(c: list) -> Poly:
    """Trailing-zero strip for lists already holding Fractions."""
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def poly_add(p: Poly, q: Poly) -> Poly:
    if not p:
        return q
    if not q:
        return p
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, v in enumerate(q):
        out[k] += v
    return _strip(out) if len(p) == len(q) else tuple(out)


def poly_neg(p: Poly) -> Poly:
    return tuple(-v for v in p)


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_neg(q))


def poly_scale(p: Poly, c: Fraction) -> Poly:
    if not c or not p:
        return ()
    if c == 1:
        return p
    if c == -1:
        return tuple(-v for v in p)
    return tuple(v * c for v in p)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [_ZERO] * (len(p) + len(q) - 1)
    for a, u in enumerate(p):
        if u == 0:
            continue
        for b, v in enumerate(q):
            out[a + b] += u * v
    return _strip(out)


def poly_deriv(p: Poly) -> Poly:
    return tuple(p[k] * k for k in range(1, len(p)))


def poly_eval(p: Poly, x: RationalLike) -> Fraction:
    x = rational(x)
    acc = _ZERO
    for v in reversed(p):
        acc = acc * x + v
    return acc


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for k, v in enumerate(p):
        if v == 0:
            continue
        c = format_rational(v)
        if k == 0:
            terms.append(c)
        else:
            mono = "x" if k == 1 else f"x^{k}"
            terms.append(f"{c}*{mono}")
    return " + ".join(terms)


# -- superfunctions -------------------------------------------------------------

class SuperFunction:
    """The superfunction ``even(x) + theta * odd(x)`` (theta^2 = 0)."""

    __slots__ = ("even", "odd", "_hash")

    def __init__(self, even: Sequence = (), odd: Sequence = ()):
        self.even: Poly = _trim(even)
        self.odd: Poly = _trim(odd)
        self._hash = None

    @classmethod
    def _raw(cls, even: Poly, odd: Poly) -> "SuperFunction":
        """Build from already-normalized polynomials (no copying or checks)."""
        obj = cls.__new__(cls)
        obj.even = even
        obj.odd = odd
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def const(cls, c: RationalLike) -> "SuperFunction":
        return cls((rational(c),))

    @classmethod
    def monomial(cls, degree: int, odd: bool = False, coeff: RationalLike = 1) -> "SuperFunction":
        """``coeff * x^degree`` or ``coeff * theta * x^degree``."""
        poly = (_ZERO,) * degree + (rational(coeff),)
        return cls((), poly) if odd else cls(poly, ())

    # structure
    def is_zero(self) -> bool:
        return not self.even and not self.odd

    def is_homogeneous(self) -> bool:
        return not self.even or not self.odd

    @property
    def parity(self) -> Parity:
        """Parity of a homogeneous superfunction (zero counts as even)."""
        if self.even and self.odd:
            raise InhomogeneousError(f"{self} has no definite parity")
        return Parity.ODD if self.odd else Parity.EVEN

    def parts(self) -> tuple["SuperFunction", "SuperFunction"]:
        """Split into (even part, odd part)."""
        return SuperFunction(self.even, ()), SuperFunction((), self.odd)

    # vector space / algebra
    def __add__(self, other: "SuperFunction") -> "SuperFunction":
        if not isinstance(other, SuperFunction):
            return NotImplemented
        return SuperFunction._raw(poly_add(self.even, other.even), poly_add(self.odd, other.odd))

    def __sub__(self, other: "SuperFunction") -> "SuperFunction":
        if not isinstance(other, SuperFunction):
            return NotImplemented
        return SuperFunction._raw(poly_sub(self.even, other.even), poly_sub(self.odd, other.odd))

    def __neg__(self) -> "SuperFunction":
        return SuperFunction._raw(poly_neg(self.even), poly_neg(self.odd))

    def __mul__(self, other) -> "SuperFunction":
        if isinstance(other, SuperFunction):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return SuperFunction._raw(poly_scale(self.even, c), poly_scale(self.odd, c))
        return NotImplemented

    def __rmul__(self, other) -> "SuperFunction":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperFunction):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.even, self.odd))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __call__(self, x: RationalLike) -> tuple[Fraction, Fraction]:
        """Evaluate both components at ``x``."""
        return poly_eval(self.even, x), poly_eval(self.odd, x)

    def __str__(self) -> str:
        return f"{format_poly(self.even)} + θ*({format_poly(self.odd)})"

    def __repr__(self) -> str:
        return f"SuperFunction({self})"


ZERO = SuperFunction()
ONE = SuperFunction.const(1)
X = SuperFunction.monomial(1)
THETA = SuperFunction.monomial(0, odd=True)


def as_superfunction(value) -> SuperFunction:
    if isinstance(value, SuperFunction):
        return value
    return SuperFunction.const(value)


def multiply(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    """Graded-commutative product: ``(f0 + θf1)(g0 + θg1) = f0g0 + θ(f0g1 + f1g0)``."""
    even = poly_mul(f.even, g.even)
    odd = poly_add(poly_mul(f.even, g.odd), poly_mul(f.odd, g.even))
    return SuperFunction._raw(even, odd)


def d_x(f: SuperFunction) -> SuperFunction:
    return SuperFunction._raw(poly_deriv(f.even), poly_deriv(f.odd))


def d_theta(f: SuperFunction) -> SuperFunction:
    return SuperFunction._raw(f.odd, ())


def apply_D(f: SuperFunction) -> SuperFunction:
    """``D = ∂_θ + θ∂_x``: ``f1 + θ f0'``."""
    return SuperFunction._raw(f.odd, poly_deriv(f.even))


def apply_Dbar(f: SuperFunction) -> SuperFunction:
    """``D̄ = ∂_θ − θ∂_x``: ``f1 − θ f0'``."""
    return SuperFunction._raw(f.odd, poly_neg(poly_deriv(f.even)))


def d_power(f: SuperFunction, j: int) -> SuperFunction:
    for _ in range(j):
        if f.is_zero():
            break
        f = apply_D(f)
    return f


def dbar_power(f: SuperFunction, j: int) -> SuperFunction:
    for _ in range(j):
        if f.is_zero():
            break
        f = apply_Dbar(f)
    return f


def sign(exponent: int) -> int:
    """``(-1)**exponent``."""
    return -1 if exponent % 2 else 1
