"""n-ary differential operators ``Σ a_ī D̄^{i1} ⊗ ... ⊗ D̄^{in}`` on weighted densities.

Two independent routes to the K(1)-action on operators live here:

* :func:`lie_operator_closed` evaluates the closed coefficient formula term by
  term, and
* :func:`lie_operator_oracle` composes ``𝔏^μ ∘ A − (−1)^{|A||F|} A ∘ 𝔏^{λ̄}``
  symbolically in the graded tensor convention and recollects coefficients.

Operators keep their order doubled (``order2 = 2k``) so every index is an int.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .contact import ContactField, WeightedDensity, _field, lie_density, lie_density_coefficient
from .superfield import (
    ZERO,
    InhomogeneousError,
    Parity,
    SuperFunction,
    apply_D,
    apply_Dbar,
    d_x,
    dbar_power,
    format_poly,
    sign,
)
from .supermath import RationalLike, format_rational, rational, super_binomial

MultiIndex = tuple  # tuple[int, ...]

HALF = Fraction(1, 2)


@lru_cache(maxsize=None)
def multi_indices(n: int, ell: int) -> tuple[MultiIndex, ...]:
    """All n-tuples of nonnegative ints summing to ``ell``, lexicographically descending.

    ``(2,0), (1,1), (0,2)`` for ``n = 2, ell = 2``.
    """
    if n == 1:
        return ((ell,),)
    out = []
    for first in range(ell, -1, -1):
        for rest in multi_indices(n - 1, ell - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def graded_indices(n: int, order2: int) -> tuple[MultiIndex, ...]:
    """Multi-indices with ``|ī| <= order2`` in graded lexicographic order."""
    return tuple(i for ell in range(order2 + 1) for i in multi_indices(n, ell))


def unit(n: int, t: int, r: int = 1) -> MultiIndex:
    """``r * 1_t`` (``t`` is zero-based)."""
    return tuple(r if j == t else 0 for j in range(n))


def add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def _add_into(acc: dict, key, value: SuperFunction) -> None:
    if value.is_zero():
        return
    prev = acc.get(key)
    acc[key] = value if prev is None else prev + value


@dataclass(frozen=True)
class NaryOperator:
    """Element of 𝔇ᵏ_{λ̄,μ}: coefficients ``a_ī`` for ``|ī| <= order2``.

    Zero coefficients are never stored, so equality is structural.
    """

    n: int
    order2: int
    lambdas: tuple
    mu: Fraction
    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        lambdas = tuple(rational(v) for v in self.lambdas)
        if len(lambdas) != self.n:
            raise ValueError(f"expected {self.n} source weights, got {len(lambdas)}")
        if self.n < 1 or self.order2 < 0:
            raise ValueError("need n >= 1 and order2 >= 0")
        clean = {}
        for idx, a in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.n or min(idx) < 0:
                raise ValueError(f"bad multi-index {idx} for arity {self.n}")
            if sum(idx) > self.order2:
                raise ValueError(f"index {idx} exceeds order2 = {self.order2}")
            if not a.is_zero():
                clean[idx] = a
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "mu", rational(self.mu))
        object.__setattr__(self, "coeffs", clean)

    @property
    def delta(self) -> Fraction:
        return self.mu - sum(self.lambdas, Fraction(0))

    def coeff(self, idx: MultiIndex) -> SuperFunction:
        return self.coeffs.get(tuple(idx), ZERO)

    def is_homogeneous(self) -> bool:
        try:
            self.parity
        except InhomogeneousError:
            return False
        return True

    @property
    def parity(self) -> Parity:
        """``|a_ī| + |ī| mod 2``, common to all terms (zero operator: even)."""
        seen = set()
        for idx, a in self.coeffs.items():
            if not a.is_homogeneous():
                raise InhomogeneousError(f"coefficient at {idx} is inhomogeneous")
            seen.add(a.parity + sum(idx))
        if len(seen) > 1:
            raise InhomogeneousError("operator mixes parities")
        return seen.pop() if seen else Parity.EVEN

    def parts(self) -> tuple["NaryOperator", "NaryOperator"]:
        """Split into (even operator, odd operator)."""
        even, odd = {}, {}
        for idx, a in self.coeffs.items():
            a0, a1 = a.parts()
            # parity of a term is |a| + |ī|
            if sum(idx) % 2 == 0:
                _add_into(even, idx, a0)
                _add_into(odd, idx, a1)
            else:
                _add_into(odd, idx, a0)
                _add_into(even, idx, a1)
        return self.with_coeffs(even), self.with_coeffs(odd)

    def with_coeffs(self, coeffs: Mapping) -> "NaryOperator":
        return NaryOperator(self.n, self.order2, self.lambdas, self.mu, coeffs)

    def same_shape(self, other: "NaryOperator") -> bool:
        return (self.n, self.order2, self.lambdas, self.mu) == (other.n, other.order2, other.lambdas, other.mu)

    def __add__(self, other: "NaryOperator") -> "NaryOperator":
        if not self.same_shape(other):
            raise ValueError("operators live in different spaces")
        acc = dict(self.coeffs)
        for idx, a in other.coeffs.items():
            _add_into(acc, idx, a)
        return self.with_coeffs(acc)

    def __sub__(self, other: "NaryOperator") -> "NaryOperator":
        return self + other.scaled(-1)

    def scaled(self, c) -> "NaryOperator":
        return self.with_coeffs({idx: a * c for idx, a in self.coeffs.items()})

    def principal_part(self) -> dict:
        return {idx: a for idx, a in self.coeffs.items() if sum(idx) == self.order2}

    def __call__(self, phis: Sequence[WeightedDensity]) -> WeightedDensity:
        return apply(self, phis)

    def __str__(self) -> str:
        terms = [f"({a})·D̄^{idx}" for idx, a in sorted(self.coeffs.items(), key=_graded_key)]
        return " + ".join(terms) if terms else "0"


def _graded_key(item):
    idx = item[0] if isinstance(item, tuple) and isinstance(item[0], tuple) else item
    return (sum(idx), tuple(-v for v in idx))


# -- evaluation --------------------------------------------------------------------------

def _check_inputs(A: NaryOperator, phis: Sequence[WeightedDensity]) -> None:
    if len(phis) != A.n:
        raise ValueError(f"operator has arity {A.n} but got {len(phis)} densities")
    for t, (phi, lam) in enumerate(zip(phis, A.lambdas)):
        if phi.weight != lam:
            raise ValueError(f"slot {t + 1} expects weight {lam}, got {phi.weight}")


def apply(A: NaryOperator, phis: Sequence[WeightedDensity]) -> WeightedDensity:
    """``A(φ1 ⊗ ... ⊗ φn)`` with the sign ``(−1)^{Σ_{p<s} |f_p| i_s}``."""
    _check_inputs(A, phis)
    fs = [phi.coefficient for phi in phis]
    parities = [f.parity for f in fs]
    out = ZERO
    cache: dict = {}
    for idx, a in A.coeffs.items():
        exponent = 0
        suffix = 0
        for p in range(A.n - 1, -1, -1):
            exponent += parities[p] * suffix
            suffix += idx[p]
        prod = a
        for t in range(A.n):
            key = (t, idx[t])
            if key not in cache:
                cache[key] = dbar_power(fs[t], idx[t])
            prod = prod * cache[key]
            if prod.is_zero():
                break
        if not prod.is_zero():
            out = out + prod * sign(exponent)
    return WeightedDensity(out, A.mu)


def lie_tensor(f, phis: Sequence[WeightedDensity]) -> list[tuple[int, tuple[WeightedDensity, ...]]]:
    """Leibniz expansion of ``𝔏^{λ̄}_{X_f}`` on ``φ1 ⊗ ... ⊗ φn``.

    Returns ``[(sign_p, tensor_p)]`` where tensor ``p`` has ``𝔏^{λ_p}`` in slot ``p``
    and ``sign_p = (−1)^{|f| Σ_{i<p} |φ_i|}``.
    """
    xf = _field(f)
    out = []
    acc = 0
    for p, phi in enumerate(phis):
        s = sign(xf.parity * acc)
        terms = tuple(lie_density(xf, phi) if q == p else phis[q] for q in range(len(phis)))
        out.append((s, terms))
        acc += phi.parity
    return out


def lie_operator_by_evaluation(f, A: NaryOperator, phis: Sequence[WeightedDensity]) -> WeightedDensity:
    """``(𝔏^μ ∘ A − (−1)^{|A||f|} A ∘ 𝔏^{λ̄})(φ̄)`` evaluated pointwise on densities."""
    xf = _field(f)
    out = lie_density(xf, apply(A, phis))
    s = sign(A.parity * xf.parity)
    for sp, tensor in lie_tensor(xf, phis):
        out = out - apply(A, tensor) * (s * sp)
    return out


# -- the closed form ----------------------------------------------------------------------

def _bracket(r: int, i: int, lam: Fraction) -> Fraction:
    """``(r+i choose r+2)_s − ½(−1)^i (r+i choose r+1)_s + λ (r+i choose r)_s``."""
    return (
        super_binomial(r + i, r + 2)
        - HALF * sign(i) * super_binomial(r + i, r + 1)
        + lam * super_binomial(r + i, r)
    )


def lie_operator_closed(f, A: NaryOperator) -> NaryOperator:
    """K(1)-action on operators from the explicit coefficient formula.

    ``a^X_ī = 𝔏^{δ−|ī|/2}(a_ī) − Σ_t Σ_{r=1}^{2k−|ī|} (−1)^{r(|F| + |a_{ī+r1_t}| + i_1+…+i_{t−1})}
    [bracket_t(r)] D̄^r(F') a_{ī+r1_t}``.
    """
    xf = _field(f)
    if not A.is_homogeneous():
        even, odd = A.parts()
        return lie_operator_closed(xf, even) + lie_operator_closed(xf, odd)
    F = xf.hamiltonian
    pF = xf.parity
    pA = A.parity
    dF = d_x(F)
    dbar_dF = [dF]
    for _ in range(A.order2):
        dbar_dF.append(apply_Dbar(dbar_dF[-1]))
    delta = A.delta
    out: dict = {}
    for idx in graded_indices(A.n, A.order2):
        p = sum(idx)
        a = A.coeff(idx)
        if not a.is_zero():
            _add_into(out, idx, lie_density_coefficient(xf, delta - Fraction(p, 2), a))
        prefix = 0
        for t in range(A.n):
            for r in range(1, A.order2 - p + 1):
                target = list(idx)
                target[t] += r
                target = tuple(target)
                b = A.coeff(target)
                if b.is_zero():
                    continue
                pb = pA + sum(target)
                c = _bracket(r, idx[t], A.lambdas[t])
                if c == 0 or dbar_dF[r].is_zero():
                    continue
                s = sign(r * (pF + pb + prefix))
                _add_into(out, idx, (dbar_dF[r] * b) * (-s * c))
            prefix += idx[t]
    return A.with_coeffs(out)


# -- the composition oracle ----------------------------------------------------------------

def compose_slot(i: int, f, lam: RationalLike) -> dict[int, SuperFunction]:
    """Coefficients ``b_j`` of ``D̄^i ∘ 𝔏^λ_{X_f} = Σ_j b_j D̄^j`` (one slot).

    ``𝔏^λ_{X_f} = −F D̄² + ½ D(F) D̄ + λF'``; each multiplication operator is
    moved left through ``D̄^i`` by ``D̄^j ∘ G = Σ_m (j m)_s (−1)^{|G|(j−m)} D̄^m(G) D̄^{j−m}``.
    """
    xf = _field(f)
    lam = rational(lam)
    F = xf.hamiltonian
    pF = xf.parity
    pieces = [  # (multiplier, parity, extra D̄ power, scalar)
        (F, pF, 2, Fraction(-1)),
        (apply_D(F), pF + 1, 1, HALF),
        (d_x(F), pF, 0, lam),
    ]
    out: dict = {}
    for g, pg, extra, c in pieces:
        if c == 0 or g.is_zero():
            continue
        gm = g
        for m in range(i + 1):
            sb = super_binomial(i, m)
            if sb and not gm.is_zero():
                _add_into(out, i - m + extra, gm * (c * sb * sign(pg * (i - m))))
            gm = apply_Dbar(gm)
    return out


def _dbar_compose(a: SuperFunction, pa: int, idx: MultiIndex, acc: dict, scale) -> None:
    """Accumulate ``scale * D̄ ∘ (a D̄^ī)``.

    ``D̄ ∘ (a D̄^ī) = D̄(a) D̄^ī + Σ_t (−1)^{|a| + i_1+…+i_{t−1}} a D̄^{ī+1_t}``.
    """
    _add_into(acc, idx, apply_Dbar(a) * scale)
    prefix = pa
    for t in range(len(idx)):
        _add_into(acc, add_index(idx, unit(len(idx), t)), a * (scale * sign(prefix)))
        prefix += idx[t]


def _dx_compose(a: SuperFunction, idx: MultiIndex, acc: dict, scale) -> None:
    """Accumulate ``scale * ∂_x ∘ (a D̄^ī) = a' D̄^ī − Σ_t a D̄^{ī+2·1_t}``."""
    _add_into(acc, idx, d_x(a) * scale)
    for t in range(len(idx)):
        _add_into(acc, add_index(idx, unit(len(idx), t, 2)), a * (-scale))


def lie_operator_oracle(f, A: NaryOperator) -> NaryOperator:
    """``𝔏^μ ∘ A − (−1)^{|A||F|} A ∘ 𝔏^{λ̄}`` by symbolic operator composition."""
    xf = _field(f)
    if not A.is_homogeneous():
        even, odd = A.parts()
        return lie_operator_oracle(xf, even) + lie_operator_oracle(xf, odd)
    F = xf.hamiltonian
    pF = xf.parity
    pA = A.parity
    half_DF = apply_D(F) * HALF
    mu_dF = d_x(F) * A.mu
    n = A.n

    acc: dict = {}
    # 𝔏^μ ∘ A = F ∂_x ∘ A + ½D(F) D̄ ∘ A + μF' A
    for idx, a in A.coeffs.items():
        pa = pA + sum(idx)
        inner: dict = {}
        _dx_compose(a, idx, inner, 1)
        for j, c in inner.items():
            _add_into(acc, j, F * c)
        inner = {}
        _dbar_compose(a, pa, idx, inner, 1)
        for j, c in inner.items():
            _add_into(acc, j, half_DF * c)
        _add_into(acc, idx, mu_dF * a)

    # − (−1)^{|A||F|} A ∘ 𝔏^{λ̄}
    outer = -sign(pA * pF)
    slot_cache: dict = {}
    for idx, a in A.coeffs.items():
        prefix = 0
        suffix = sum(idx)
        for t in range(n):
            suffix -= idx[t]
            key = (t, idx[t])
            if key not in slot_cache:
                slot_cache[key] = compose_slot(idx[t], xf, A.lambdas[t])
            for j, b in slot_cache[key].items():
                pb = pF + idx[t] + j
                s = outer * sign(pF * suffix + pb * prefix)
                new = idx[:t] + (j,) + idx[t + 1:]
                _add_into(acc, new, (a * b) * s)
            prefix += idx[t]

    high = {idx: c for idx, c in acc.items() if sum(idx) > A.order2 and not c.is_zero()}
    if high:
        raise ArithmeticError(f"composition left terms above the filtration: {sorted(high)}")
    return A.with_coeffs({idx: c for idx, c in acc.items() if idx not in high and sum(idx) <= A.order2})


# -- random sampling and serialization ------------------------------------------------------

def random_superfunction(rng: random.Random, parity: int, max_degree: int = 2, span: int = 3) -> SuperFunction:
    poly = [Fraction(rng.randint(-span, span)) for _ in range(rng.randint(0, max_degree) + 1)]
    return SuperFunction((), poly) if parity % 2 else SuperFunction(poly, ())


def random_operator(
    rng: random.Random,
    n: int,
    order2: int,
    lambdas: Sequence[RationalLike],
    mu: RationalLike,
    parity: int | None = None,
    max_degree: int = 2,
    density: float = 0.8,
) -> NaryOperator:
    """A random homogeneous operator with small integer polynomial coefficients."""
    if parity is None:
        parity = rng.randint(0, 1)
    coeffs = {}
    for idx in graded_indices(n, order2):
        if rng.random() < density:
            coeffs[idx] = random_superfunction(rng, parity + sum(idx), max_degree)
    return NaryOperator(n, order2, tuple(lambdas), mu, coeffs)


def poly_to_json(p) -> list[str]:
    return [format_rational(v) for v in p]


def poly_from_json(data) -> tuple:
    return tuple(rational(v) for v in data)


def operator_to_json(A: NaryOperator) -> dict:
    coeffs = [
        {"index": list(idx), "f0": poly_to_json(a.even), "f1": poly_to_json(a.odd)}
        for idx, a in sorted(A.coeffs.items(), key=_graded_key)
    ]
    return {
        "n": A.n,
        "order2": A.order2,
        "lambdas": [format_rational(v) for v in A.lambdas],
        "mu": format_rational(A.mu),
        "coeffs": coeffs,
    }


def operator_from_json(data: Mapping) -> NaryOperator:
    coeffs = {
        tuple(c["index"]): SuperFunction(poly_from_json(c["f0"]), poly_from_json(c["f1"]))
        for c in data["coeffs"]
    }
    return NaryOperator(int(data["n"]), int(data["order2"]), tuple(data["lambdas"]), data["mu"], coeffs)


def describe(A: NaryOperator) -> Iterator[str]:
    for idx, a in sorted(A.coeffs.items(), key=_graded_key):
        yield f"{idx}: {format_poly(a.even)} + θ*({format_poly(a.odd)})"
