"""Contact vector fields on S^{1|1}, the contact bracket, osp(1|2) and densities.

A contact field ``X_f = -f D̄² + ½ D(f) D̄`` is stored by its Hamiltonian ``f``.
Since ``D̄² = -∂_x`` it acts on a superfunction as ``G ↦ f G' + ½ D(f) D̄(G)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .superfield import (
    InhomogeneousError,
    Parity,
    SuperFunction,
    THETA,
    X,
    apply_D,
    apply_Dbar,
    as_superfunction,
    d_theta,
    d_x,
    sign,
)
from .supermath import RationalLike, rational

HALF = Fraction(1, 2)


def _require_homogeneous(f: SuperFunction, what: str = "Hamiltonian") -> Parity:
    if not f.is_homogeneous():
        raise InhomogeneousError(f"{what} {f} is not homogeneous; split it into parts first")
    return f.parity


@dataclass(frozen=True)
class ContactField:
    hamiltonian: SuperFunction

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian", as_superfunction(self.hamiltonian))
        _require_homogeneous(self.hamiltonian)

    @property
    def parity(self) -> Parity:
        return self.hamiltonian.parity

    def __call__(self, g: SuperFunction) -> SuperFunction:
        return contact_apply(self, g)

    def as_vector_field(self) -> "VectorField":
        f = self.hamiltonian
        half_df = apply_D(f) * HALF
        return VectorField(f - half_df * THETA, half_df)

    def __str__(self) -> str:
        return f"X[{self.hamiltonian}]"


def _field(f) -> ContactField:
    return f if isinstance(f, ContactField) else ContactField(as_superfunction(f))


@dataclass(frozen=True)
class WeightedDensity:
    """``coefficient * α^weight``."""

    coefficient: SuperFunction
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficient", as_superfunction(self.coefficient))
        object.__setattr__(self, "weight", rational(self.weight))

    @property
    def parity(self) -> Parity:
        return self.coefficient.parity

    def _check(self, other: "WeightedDensity") -> None:
        if self.weight != other.weight:
            raise ValueError(f"cannot combine densities of weight {self.weight} and {other.weight}")

    def __add__(self, other: "WeightedDensity") -> "WeightedDensity":
        self._check(other)
        return WeightedDensity(self.coefficient + other.coefficient, self.weight)

    def __sub__(self, other: "WeightedDensity") -> "WeightedDensity":
        self._check(other)
        return WeightedDensity(self.coefficient - other.coefficient, self.weight)

    def __neg__(self) -> "WeightedDensity":
        return WeightedDensity(-self.coefficient, self.weight)

    def __mul__(self, c) -> "WeightedDensity":
        return WeightedDensity(self.coefficient * c, self.weight)

    __rmul__ = __mul__


def contact_apply(f, g: SuperFunction) -> SuperFunction:
    """``X_f(G) = -f D̄²(G) + ½ D(f) D̄(G) = f G' + ½ D(f) D̄(G)``."""
    h = _field(f).hamiltonian
    return h * d_x(g) + (apply_D(h) * apply_Dbar(g)) * HALF


def contact_bracket(f, g) -> SuperFunction:
    """Hamiltonian of ``[X_f, X_g]``: ``fg' − f'g + ½(−1)^{|f|(|g|+1)} D(f)D(g)``."""
    f = as_superfunction(f)
    g = as_superfunction(g)
    pf = _require_homogeneous(f)
    pg = _require_homogeneous(g)
    return f * d_x(g) - d_x(f) * g + (apply_D(f) * apply_D(g)) * (HALF * sign(pf * (pg + 1)))


def lie_density_coefficient(f, lam: RationalLike, g: SuperFunction) -> SuperFunction:
    """``𝔏^λ_{X_f}(G) = X_f(G) + λ f' G`` on bare coefficients."""
    h = _field(f).hamiltonian
    lam = rational(lam)
    out = contact_apply(h, g)
    if lam:
        out = out + (d_x(h) * g) * lam
    return out


def lie_density(f, density: WeightedDensity) -> WeightedDensity:
    return WeightedDensity(lie_density_coefficient(f, density.weight, density.coefficient), density.weight)


def field_commutator(f, g, G: SuperFunction) -> SuperFunction:
    """``(X_f X_g − (−1)^{|f||g|} X_g X_f)(G)``, the Lie superbracket as operators."""
    xf, xg = _field(f), _field(g)
    s = sign(xf.parity * xg.parity)
    return xf(xg(G)) - xg(xf(G)) * s


OSP_HAMILTONIANS = (
    SuperFunction.const(1),
    X,
    SuperFunction.monomial(2),
    THETA,
    SuperFunction.monomial(1, odd=True),
)
OSP_NAMES = ("1", "x", "x^2", "θ", "xθ")


def osp_generators() -> list[ContactField]:
    """Contact fields with Hamiltonians 1, x, x², θ, xθ (in that order)."""
    return [ContactField(h) for h in OSP_HAMILTONIANS]


# -- general first-order vector fields ----------------------------------------------

@dataclass(frozen=True)
class VectorField:
    """``dx_coeff ∂_x + dtheta_coeff ∂_θ`` with coefficients written on the left."""

    dx_coeff: SuperFunction
    dtheta_coeff: SuperFunction

    @property
    def parity(self) -> Parity:
        p0 = self.dx_coeff.parity
        p1 = self.dtheta_coeff.parity
        if self.dx_coeff.is_zero():
            return p1 + 1 if not self.dtheta_coeff.is_zero() else Parity.EVEN
        if not self.dtheta_coeff.is_zero() and p1 + 1 != p0:
            raise InhomogeneousError("vector field has no definite parity")
        return p0

    def __call__(self, g: SuperFunction) -> SuperFunction:
        return self.dx_coeff * d_x(g) + self.dtheta_coeff * d_theta(g)


def commutator_with_dbar(v: VectorField) -> VectorField:
    """``[V, D̄] = V D̄ − (−1)^{|V|} D̄ V``, read off from its values on x and θ."""
    s = sign(v.parity)

    def bracket(g: SuperFunction) -> SuperFunction:
        return v(apply_Dbar(g)) - apply_Dbar(v(g)) * s

    return VectorField(bracket(X), bracket(THETA))


def is_contact(v: VectorField) -> bool:
    """True iff ``[V, D̄]`` is a superfunction multiple of ``D̄ = ∂_θ − θ∂_x``.

    ``W = A∂_x + B∂_θ`` is a multiple of D̄ exactly when ``A = −θB``.
    """
    w = commutator_with_dbar(v)
    return w.dx_coeff == -(THETA * w.dtheta_coeff)
