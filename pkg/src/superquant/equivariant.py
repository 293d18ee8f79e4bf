"""osp(1|2)-equivariant symbol and quantization maps.

A coefficient table holds constants ``ϖ^s̄_ī`` (``|ī| <= |s̄| <= 2k``) and defines the
symbol map ``ā_ī = Σ_{s̄} ϖ^s̄_ī D^{|s̄|−|ī|}(a_s̄)``.  Tables come from

* :func:`solve_varpi` -- the recursion obtained from equivariance under ``xD``;
  this is the ground truth,
* :func:`gamma` / :func:`gamma_table` -- the closed form of the normalized table,
* :func:`invert_gamma` -- exact triangular inversion giving the quantization table.

:func:`gamma_literal` and :func:`beta_closed_form` are literal variants kept as
diagnostics; :func:`chi_coefficient` re-expresses the symbol of a single top term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .nary import MultiIndex, NaryOperator, graded_indices, multi_indices
from .superfield import ZERO, SuperFunction, d_power, sign
from .supermath import (
    RationalLike,
    format_rational,
    gen_binomial,
    rational,
    super_binomial,
    upsilon,
    xi,
)
from .symbols import Symbol

KINDS = ("gamma", "beta", "chi", "varpi")


class ResonantDelta(ArithmeticError):
    """The shift δ is resonant: the pivot at (ell, p) vanishes."""

    def __init__(self, delta: Fraction, ell: int, p: int):
        self.delta = delta
        self.ell = ell
        self.p = p
        super().__init__(
            f"resonant shift delta = {format_rational(delta)}: pivot vanishes at (ell, p) = ({ell}, {p})"
        )


def is_resonant(delta: RationalLike, order2: int) -> bool:
    """True iff ``2δ`` is an integer in ``[1, 2k]``."""
    two_delta = 2 * rational(delta)
    return two_delta.denominator == 1 and 1 <= two_delta <= order2


def pivot(delta: Fraction, ell: int, p: int) -> Fraction:
    """``(−1)^{ℓ−p} ([(ℓ−p)/2] + (1 − (−1)^{ℓ−p})(δ − ℓ/2))``."""
    m = ell - p
    return sign(m) * (Fraction(m // 2) + (1 - sign(m)) * (delta - Fraction(ell, 2)))


def first_resonant_pivot(delta: RationalLike, order2: int):
    """First vanishing pivot ``(ell, p)`` in graded order, or None."""
    delta = rational(delta)
    for p in range(order2 + 1):
        for ell in range(p + 1, order2 + 1):
            if pivot(delta, ell, p) == 0:
                return ell, p
    return None


@dataclass(frozen=True)
class CoefficientTable:
    """Constants ``(s̄, ī) ↦ value``; absent pairs are zero."""

    kind: str
    n: int
    order2: int
    lambdas: tuple
    mu: Fraction
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")
        lambdas = tuple(rational(v) for v in self.lambdas)
        if len(lambdas) != self.n:
            raise ValueError("lambdas length must equal n")
        clean = {}
        for (s, i), v in self.entries.items():
            v = rational(v)
            if v != 0:
                clean[(tuple(s), tuple(i))] = v
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "mu", rational(self.mu))
        object.__setattr__(self, "entries", clean)

    @property
    def delta(self) -> Fraction:
        return self.mu - sum(self.lambdas, Fraction(0))

    def __getitem__(self, key) -> Fraction:
        s, i = key
        return self.entries.get((tuple(s), tuple(i)), Fraction(0))

    def pairs(self):
        """All ``(s̄, ī)`` with ``|ī| <= |s̄| <= 2k``, graded order on ī then s̄."""
        idx = graded_indices(self.n, self.order2)
        for i in idx:
            for s in idx:
                if sum(s) >= sum(i):
                    yield s, i

    def matches(self, A) -> bool:
        return (self.n, self.order2, self.lambdas, self.mu) == (A.n, A.order2, A.lambdas, A.mu)


def _mu_from(lambdas: Sequence[Fraction], delta: Fraction) -> Fraction:
    return delta + sum(lambdas, Fraction(0))


# -- recursion ------------------------------------------------------------------------

def solve_varpi(
    lambdas: Sequence[RationalLike],
    delta: RationalLike,
    order2: int,
    principal: Mapping | None = None,
    halved: bool = False,
    partial: bool = False,
) -> CoefficientTable:
    """Solve the equivariance recursion row by row.

    For ``ℓ = |s̄| > p = |ī|``::

        pivot(ℓ, p) ϖ^s̄_ī = Σ_j (−1)^{s_1+…+s_{j−1}} ([s_j/2] + (1 − (−1)^{s_j}) λ_j) ϖ^{s̄−1_j}_ī

    ``principal`` maps ī to the diagonal value ``ϖ^ī_ī`` (default 1).  With
    ``halved=True`` both sides use ``Υ`` (an overall factor ½), which must give
    the same table.  A vanishing pivot raises :class:`ResonantDelta` unless
    ``partial`` is set, in which case the affected entries and everything
    depending on them are left out of the table.
    """
    lambdas = tuple(rational(v) for v in lambdas)
    delta = rational(delta)
    n = len(lambdas)
    hit = first_resonant_pivot(delta, order2)
    if hit is not None and not partial:
        raise ResonantDelta(delta, *hit)
    factor = Fraction(1, 2) if halved else Fraction(1)
    principal = principal or {}
    entries: dict = {}
    for i in graded_indices(n, order2):
        p = sum(i)
        row = {i: rational(principal.get(i, 1))}
        unknown = set()
        for ell in range(p + 1, order2 + 1):
            piv = pivot(delta, ell, p) * factor
            for s in multi_indices(n, ell):
                rhs = Fraction(0)
                prefix = 0
                blocked = piv == 0
                for j in range(n):
                    if s[j] > 0:
                        below = s[:j] + (s[j] - 1,) + s[j + 1:]
                        weight = upsilon(lambdas[j], s[j])
                        if below in unknown and weight:
                            blocked = True
                        prev = row.get(below)
                        if prev:
                            rhs += sign(prefix) * 2 * factor * weight * prev
                    prefix += s[j]
                if blocked:
                    unknown.add(s)
                elif rhs:
                    row[s] = rhs / piv
        for s, v in row.items():
            entries[(s, i)] = v
    return CoefficientTable("varpi", n, order2, lambdas, _mu_from(lambdas, delta), entries)


# -- closed forms ---------------------------------------------------------------------

def _dominates(s: MultiIndex, i: MultiIndex) -> bool:
    return all(a >= b for a, b in zip(s, i))


def _slot_factor(s: MultiIndex, i: MultiIndex, t: int, lambdas, literal: bool = False) -> Fraction:
    """Factor of slot ``t >= 2`` (zero-based ``t >= 1``) without the δ-denominator.

    The sign exponent is ``(s_1+…+s_{t−1})(s_t−i_t)``; ``literal=True`` uses
    ``Σ_{j<t} s_j(s_{j+1}−i_{j+1})`` instead (the two agree for n = 2).
    """
    phi = sum(s[j] - i[j] for j in range(t + 1))
    if literal:
        psi = sum(s[j] * (s[j + 1] - i[j + 1]) for j in range(t))
    else:
        psi = sum(s[:t]) * (s[t] - i[t])
    d = s[t] - i[t]
    num = sign(psi) * super_binomial(phi, d) * xi(s[t], i[t], lambdas[t])
    den = math.comb(phi // 2, d // 2) * math.comb((phi + 1) // 2, (d + 1) // 2)
    return num / den


def gamma(s_bar: MultiIndex, i_bar: MultiIndex, lambdas: Sequence[RationalLike], delta: RationalLike) -> Fraction:
    """Normalized equivariant coefficient ``γ^s̄_ī`` (zero unless ``s̄ >= ī``).

    ``(−1)^{[(ℓ−p+1)/2]} Ξ_{s1,i1}(λ1) Π_{t≥2} [slot factor] / (2δ−p−1 choose [(ℓ−p+1)/2])``
    where the slot factor is ``(−1)^{(s_1+…+s_{t−1})(s_t−i_t)} (φ(t) choose s_t−i_t)_s Ξ_{st,it}(λt)
    / (([φ/2] choose [(s_t−i_t)/2]) ([(φ+1)/2] choose [(s_t−i_t+1)/2]))`` and
    ``φ(t) = Σ_{j≤t}(s_j − i_j)``.  The δ-binomial is taken once, outside the product.
    """
    lambdas = tuple(rational(v) for v in lambdas)
    delta = rational(delta)
    s_bar, i_bar = tuple(s_bar), tuple(i_bar)
    if not _dominates(s_bar, i_bar):
        return Fraction(0)
    ell, p = sum(s_bar), sum(i_bar)
    q = (ell - p + 1) // 2
    den = gen_binomial(2 * delta - p - 1, q)
    if den == 0:
        raise ZeroDivisionError(f"(2δ−p−1 choose {q}) vanishes at δ = {delta}, p = {p}")
    value = sign(q) * xi(s_bar[0], i_bar[0], lambdas[0]) / den
    for t in range(1, len(s_bar)):
        if value == 0:
            break
        value *= _slot_factor(s_bar, i_bar, t, lambdas)
    return value


def gamma_literal(s_bar: MultiIndex, i_bar: MultiIndex, lambdas: Sequence[RationalLike], delta: RationalLike) -> Fraction:
    """Literal variant: δ-binomial inside the slot product and the adjacent-pair ψ.

    For n = 2 this equals :func:`gamma`.  For n = 1 the δ-binomial is absent, and
    for n = 3 it is squared and some signs flip.
    """
    lambdas = tuple(rational(v) for v in lambdas)
    delta = rational(delta)
    if not _dominates(s_bar, i_bar):
        return Fraction(0)
    ell, p = sum(s_bar), sum(i_bar)
    q = (ell - p + 1) // 2
    den = gen_binomial(2 * delta - p - 1, q)
    value = sign(q) * xi(s_bar[0], i_bar[0], lambdas[0])
    for t in range(1, len(s_bar)):
        if den == 0:
            raise ZeroDivisionError("vanishing δ-binomial")
        value *= _slot_factor(s_bar, i_bar, t, lambdas, literal=True) / den
    return value


def gamma_table(lambdas: Sequence[RationalLike], mu: RationalLike, order2: int, formula=gamma) -> CoefficientTable:
    lambdas = tuple(rational(v) for v in lambdas)
    mu = rational(mu)
    delta = mu - sum(lambdas, Fraction(0))
    hit = first_resonant_pivot(delta, order2)
    if hit is not None:
        raise ResonantDelta(delta, *hit)
    n = len(lambdas)
    entries = {}
    idx = graded_indices(n, order2)
    for i in idx:
        for s in idx:
            if sum(s) >= sum(i) and _dominates(s, i):
                entries[(s, i)] = formula(s, i, lambdas, delta)
    return CoefficientTable("gamma", n, order2, lambdas, mu, entries)


def beta_closed_form(s_bar: MultiIndex, i_bar: MultiIndex, lambdas: Sequence[RationalLike], delta: RationalLike) -> Fraction:
    """Closed-form quantization coefficient (diagnostic only; see :func:`invert_gamma`).

    Off the diagonal: sign ``(−1)^{[(ℓ−p−1)/2]}`` and δ-binomial
    ``(2δ−ℓ choose [(ℓ−p+1)/2])`` inside the slot product; on the diagonal it is γ.
    """
    lambdas = tuple(rational(v) for v in lambdas)
    delta = rational(delta)
    s_bar, i_bar = tuple(s_bar), tuple(i_bar)
    if not _dominates(s_bar, i_bar):
        return Fraction(0)
    ell, p = sum(s_bar), sum(i_bar)
    if ell == p:
        return gamma(s_bar, i_bar, lambdas, delta)
    q = (ell - p + 1) // 2
    den = gen_binomial(2 * delta - ell, q)
    value = sign((ell - p - 1) // 2) * xi(s_bar[0], i_bar[0], lambdas[0])
    for t in range(1, len(s_bar)):
        if den == 0:
            raise ZeroDivisionError("vanishing δ-binomial")
        value *= _slot_factor(s_bar, i_bar, t, lambdas) / den
    return value


def chi_coefficient(
    i_bar: MultiIndex,
    s_bar: MultiIndex,
    lambdas: Sequence[RationalLike],
    delta: RationalLike,
    reading: str = "shift",
    sign_rule: str = "prefix",
) -> Fraction:
    """Single-top-coefficient form: coefficient of ``D^{|s̄|}(a_ī)`` in component ``ī − s̄``.

    ``(−1)^{[(ℓ+1)/2]} Ξ_{i1,i1−s1}(λ1) Π_{t≥2} (−1)^{e(t)} (Γ(t) choose s_t)_s Ξ_{it,it−st}(λt)
    / (([Γ/2] choose [s_t/2]) ([(Γ+1)/2] choose [(s_t+1)/2]))`` divided once by
    ``(2δ+φ−1 choose [(ℓ+1)/2])``, where ``Γ(t) = Σ_{j≤t} s_j``.

    ``reading`` fixes the undefined ``φ``: ``"shift"`` is ``Σ(s_j − i_j) = ℓ − |ī|``,
    ``"gamma"`` is ``Γ(n) = ℓ``.  ``sign_rule="prefix"`` uses ``e(t) = (i_1+…+i_{t−1}) s_t``;
    ``"adjacent"`` uses ``e(t) = Δ(t) = Σ_{j<t} s_j s_{j+1}``.  Zero unless ``ī >= s̄``.
    """
    lambdas = tuple(rational(v) for v in lambdas)
    delta = rational(delta)
    i_bar, s_bar = tuple(i_bar), tuple(s_bar)
    if not _dominates(i_bar, s_bar):
        return Fraction(0)
    ell = sum(s_bar)
    if reading == "shift":
        phi = ell - sum(i_bar)
    elif reading == "gamma":
        phi = ell
    else:
        raise ValueError(f"unknown reading {reading!r}")
    if sign_rule not in ("prefix", "adjacent"):
        raise ValueError(f"unknown sign rule {sign_rule!r}")
    q = (ell + 1) // 2
    den = gen_binomial(2 * delta + phi - 1, q)
    if den == 0:
        raise ZeroDivisionError("vanishing δ-binomial")
    value = sign(q) * xi(i_bar[0], i_bar[0] - s_bar[0], lambdas[0]) / den
    for t in range(1, len(i_bar)):
        g = sum(s_bar[: t + 1])
        if sign_rule == "prefix":
            e = sum(i_bar[:t]) * s_bar[t]
        else:
            e = sum(s_bar[j] * s_bar[j + 1] for j in range(t))
        num = sign(e) * super_binomial(g, s_bar[t]) * xi(i_bar[t], i_bar[t] - s_bar[t], lambdas[t])
        d = math.comb(g // 2, s_bar[t] // 2) * math.comb((g + 1) // 2, (s_bar[t] + 1) // 2)
        value *= num / d
    return value


def chi_table(top: MultiIndex, lambdas, mu, order2: int, **kwargs) -> CoefficientTable:
    """χ entries for one top index ``ī``, keyed ``(s̄, ī)`` where ``s̄`` is the drop ``ī − component``."""
    lambdas = tuple(rational(v) for v in lambdas)
    mu = rational(mu)
    delta = mu - sum(lambdas, Fraction(0))
    entries = {}
    for s in graded_indices(len(lambdas), order2):
        if _dominates(top, s):
            entries[(s, tuple(top))] = chi_coefficient(top, s, lambdas, delta, **kwargs)
    return CoefficientTable("chi", len(lambdas), order2, lambdas, mu, entries)


def symbol_of_top_term_via_chi(A: NaryOperator, top: MultiIndex, **kwargs) -> Symbol:
    """``σ^{Id}(a_ī D̄^ī)`` for a single top coefficient, assembled from χ.

    Component ``ī − s̄`` is ``χ^ī_s̄ D^{|s̄|}(a_ī)``.
    """
    top = tuple(top)
    a = A.coeff(top)
    comps = {}
    for s in graded_indices(A.n, A.order2):
        if _dominates(top, s):
            c = chi_coefficient(top, s, A.lambdas, A.delta, **kwargs)
            if c:
                comps[tuple(x - y for x, y in zip(top, s))] = d_power(a, sum(s)) * c
    return Symbol(A.n, A.order2, A.delta, comps)


# -- maps -----------------------------------------------------------------------------

def _check_table(table: CoefficientTable, obj, what: str) -> None:
    if (table.n, table.order2) != (obj.n, obj.order2):
        raise ValueError(f"table shape ({table.n}, {table.order2}) does not match {what}")
    hit = first_resonant_pivot(table.delta, table.order2)
    if hit is not None:
        raise ResonantDelta(table.delta, *hit)


def _transform(coeffs: Mapping, table: CoefficientTable) -> dict:
    out: dict = {}
    rows: dict = {}
    for (s, i), v in table.entries.items():
        rows.setdefault(i, []).append((s, v))
    for i, row in rows.items():
        p = sum(i)
        acc = ZERO
        for s, v in row:
            a = coeffs.get(s)
            if a is None:
                continue
            term = d_power(a, sum(s) - p)
            if not term.is_zero():
                acc = acc + term * v
        if not acc.is_zero():
            out[i] = acc
    return out


def symbol_map(A: NaryOperator, table: CoefficientTable) -> Symbol:
    """``ā_ī = Σ_{ℓ=p}^{2k} Σ_{|s̄|=ℓ} table(s̄, ī) D^{ℓ−p}(a_s̄)``."""
    _check_table(table, A, "operator")
    if not table.matches(A):
        raise ValueError("table weights differ from the operator's weights")
    return Symbol(A.n, A.order2, A.delta, _transform(A.coeffs, table))


def quantize(P: Symbol, table: CoefficientTable) -> NaryOperator:
    """``b̃_ī = Σ_{s̄} table(s̄, ī) D^{ℓ−p}(b̄_s̄)`` with a quantization (β) table."""
    _check_table(table, P, "symbol")
    if table.delta != P.delta:
        raise ValueError("table shift differs from the symbol's shift")
    return NaryOperator(P.n, P.order2, table.lambdas, table.mu, _transform(P.components, table))


def truncation_table(lambdas: Sequence[RationalLike], mu: RationalLike, order2: int) -> CoefficientTable:
    """Identity table: keeps each coefficient in place and drops all lower corrections."""
    lambdas = tuple(rational(v) for v in lambdas)
    entries = {(i, i): Fraction(1) for i in graded_indices(len(lambdas), order2)}
    return CoefficientTable("varpi", len(lambdas), order2, lambdas, mu, entries)


def invert_gamma(table: CoefficientTable) -> CoefficientTable:
    """Exact inverse of a unitriangular table: ``Σ_s β(s, ī) γ(ū, s) = [ū = ī]``.

    Row ī of β is found by forward substitution over levels ``|ū| = p, p+1, …``::

        β(ū, ī) = ([ū = ī] − Σ_{s ≠ ū} β(s, ī) γ(ū, s)) / γ(ū, ū)
    """
    hit = first_resonant_pivot(table.delta, table.order2)
    if hit is not None:
        raise ResonantDelta(table.delta, *hit)
    idx = graded_indices(table.n, table.order2)
    # columns of γ: for each ū, the list of (s, γ(ū, s)) with s below ū
    cols: dict = {}
    for (u, s), v in table.entries.items():
        if sum(u) == sum(s) and u != s:
            raise ValueError("table has off-diagonal entries within one level; not unitriangular")
        cols.setdefault(u, []).append((s, v))
    entries = {}
    for i in idx:
        p = sum(i)
        row: dict = {}
        for u in idx:
            if sum(u) < p:
                continue
            acc = Fraction(1) if u == i else Fraction(0)
            diag = None
            for s, v in cols.get(u, ()):
                if s == u:
                    diag = v
                elif s in row:
                    acc -= row[s] * v
            if diag is None or diag == 0:
                if acc == 0:
                    continue
                raise ZeroDivisionError(f"singular table at diagonal {u}")
            if acc:
                row[u] = acc / diag
        for u, v in row.items():
            entries[(u, i)] = v
    return CoefficientTable("beta", table.n, table.order2, table.lambdas, table.mu, entries)


def beta_closed_table(lambdas, mu, order2) -> CoefficientTable:
    lambdas = tuple(rational(v) for v in lambdas)
    mu = rational(mu)
    delta = mu - sum(lambdas, Fraction(0))
    entries = {}
    for i in graded_indices(len(lambdas), order2):
        for s in graded_indices(len(lambdas), order2):
            if sum(s) >= sum(i) and _dominates(s, i):
                entries[(s, i)] = beta_closed_form(s, i, lambdas, delta)
    return CoefficientTable("beta", len(lambdas), order2, lambdas, mu, entries)


# -- serialization --------------------------------------------------------------------

def _table_key(item):
    (s, i), _ = item
    return (sum(i), tuple(-v for v in i), sum(s), tuple(-v for v in s))


def table_to_json(table: CoefficientTable) -> dict:
    return {
        "kind": table.kind,
        "n": table.n,
        "order2": table.order2,
        "lambdas": [format_rational(v) for v in table.lambdas],
        "mu": format_rational(table.mu),
        "delta": format_rational(table.delta),
        "entries": [
            {"s": list(s), "i": list(i), "value": format_rational(v)}
            for (s, i), v in sorted(table.entries.items(), key=_table_key)
        ],
    }


def table_from_json(data: Mapping) -> CoefficientTable:
    entries = {(tuple(e["s"]), tuple(e["i"])): rational(e["value"]) for e in data["entries"]}
    table = CoefficientTable(data["kind"], int(data["n"]), int(data["order2"]), tuple(data["lambdas"]),
                             data["mu"], entries)
    if "delta" in data and rational(data["delta"]) != table.delta:
        raise ValueError("delta field inconsistent with lambdas and mu")
    return table
