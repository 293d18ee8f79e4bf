"""Symbols ``α^δ Σ ā_ī α^{−|ī|/2}``: graded families of weighted densities."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .contact import _field, lie_density_coefficient
from .nary import NaryOperator, _graded_key, graded_indices, poly_from_json, poly_to_json, random_superfunction
from .superfield import ZERO, InhomogeneousError, Parity, SuperFunction
from .supermath import format_rational, rational


@dataclass(frozen=True)
class Symbol:
    """Element of 𝒮ᵏ_δ; component ``ī`` is a density of weight ``δ − |ī|/2``."""

    n: int
    order2: int
    delta: Fraction
    components: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, a in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.n or min(idx) < 0 or sum(idx) > self.order2:
                raise ValueError(f"bad component index {idx}")
            if not a.is_zero():
                clean[idx] = a
        object.__setattr__(self, "delta", rational(self.delta))
        object.__setattr__(self, "components", clean)

    def component(self, idx) -> SuperFunction:
        return self.components.get(tuple(idx), ZERO)

    def weight(self, idx) -> Fraction:
        return self.delta - Fraction(sum(idx), 2)

    @property
    def parity(self) -> Parity:
        seen = {a.parity + sum(idx) for idx, a in self.components.items()}
        if len(seen) > 1:
            raise InhomogeneousError("symbol mixes parities")
        return seen.pop() if seen else Parity.EVEN

    def with_components(self, comps: Mapping) -> "Symbol":
        return Symbol(self.n, self.order2, self.delta, comps)


def component_count(n: int, ell: int) -> int:
    """Number of multi-indices of total degree ``ell`` in ``n`` slots."""
    return math.comb(ell + n - 1, n - 1)


def lie_symbol(f, P: Symbol) -> Symbol:
    """Act on every component by ``𝔏^{δ−|ī|/2}_{X_f}``."""
    xf = _field(f)
    return P.with_components(
        {idx: lie_density_coefficient(xf, P.weight(idx), a) for idx, a in P.components.items()}
    )


def principal_symbol(A: NaryOperator) -> Symbol:
    """Top-order coefficients ``|ī| = 2k`` as a symbol fragment (identity principal map)."""
    return Symbol(A.n, A.order2, A.delta, A.principal_part())


def random_symbol(rng: random.Random, n: int, order2: int, delta, parity: int | None = None,
                  max_degree: int = 2) -> Symbol:
    if parity is None:
        parity = rng.randint(0, 1)
    comps = {idx: random_superfunction(rng, parity + sum(idx), max_degree)
             for idx in graded_indices(n, order2)}
    return Symbol(n, order2, delta, comps)


def symbol_to_json(P: Symbol) -> dict:
    comps = [
        {"index": list(idx), "f0": poly_to_json(a.even), "f1": poly_to_json(a.odd)}
        for idx, a in sorted(P.components.items(), key=_graded_key)
    ]
    return {"n": P.n, "order2": P.order2, "delta": format_rational(P.delta), "coeffs": comps}


def symbol_from_json(data: Mapping) -> Symbol:
    comps = {
        tuple(c["index"]): SuperFunction(poly_from_json(c["f0"]), poly_from_json(c["f1"]))
        for c in data["coeffs"]
    }
    return Symbol(int(data["n"]), int(data["order2"]), data["delta"], comps)
