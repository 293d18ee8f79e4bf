"""Executable identity suites shared by the CLI ``verify`` and ``roundtrip`` commands.

Each suite returns a :class:`SuiteResult`; failures carry a small JSON-able
counterexample.  Suites that need a non-resonant shift report status
``"resonant"`` instead of running.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .contact import (
    OSP_HAMILTONIANS,
    OSP_NAMES,
    contact_apply,
    contact_bracket,
    field_commutator,
    osp_generators,
)
from .equivariant import (
    CoefficientTable,
    first_resonant_pivot,
    gamma_table,
    invert_gamma,
    quantize,
    solve_varpi,
    symbol_map,
)
from .nary import (
    NaryOperator,
    _graded_key,
    lie_operator_closed,
    lie_operator_oracle,
    operator_to_json,
    random_operator,
)
from .superfield import SuperFunction
from .supermath import format_rational, rational
from .symbols import lie_symbol, random_symbol, symbol_to_json

PASS, FAIL, RESONANT = "pass", "fail", "resonant"

# The osp(1|2) commutation table: (f, g, coefficient, h) meaning [X_f, X_g] = c X_h.
_H = dict(zip(OSP_NAMES, OSP_HAMILTONIANS))
COMMUTATION_TABLE = (
    ("1", "x^2", Fraction(2), "x"),
    ("θ", "θ", Fraction(1, 2), "1"),
    ("x", "1", Fraction(-1), "1"),
    ("x", "x^2", Fraction(1), "x^2"),
    ("xθ", "xθ", Fraction(1, 2), "x^2"),
    ("x^2", "θ", Fraction(-1), "xθ"),
    ("x", "θ", Fraction(-1, 2), "θ"),
    ("1", "xθ", Fraction(1), "θ"),
    ("1", "θ", Fraction(0), "1"),
    ("x", "xθ", Fraction(1, 2), "xθ"),
    ("x^2", "xθ", Fraction(0), "1"),
    ("xθ", "θ", Fraction(1, 2), "x"),
)


@dataclass
class SuiteResult:
    name: str
    status: str
    cases: int = 0
    detail: str = ""
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "cases": self.cases}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class WeightSystem:
    lambdas: tuple
    mu: Fraction
    order2: int

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def delta(self) -> Fraction:
        return self.mu - sum(self.lambdas, Fraction(0))

    def header(self) -> dict:
        return {
            "n": self.n,
            "order2": self.order2,
            "lambdas": [format_rational(v) for v in self.lambdas],
            "mu": format_rational(self.mu),
            "delta": format_rational(self.delta),
        }


def random_weights(rng: random.Random, n: int, order2: int) -> WeightSystem:
    """Seeded rational weights with a non-resonant shift."""
    while True:
        lambdas = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n))
        mu = Fraction(rng.randint(-12, 12), rng.randint(1, 7))
        ws = WeightSystem(lambdas, mu, order2)
        if first_resonant_pivot(ws.delta, order2) is None:
            return ws


# -- suites ---------------------------------------------------------------------------------

def commutation_suite() -> SuiteResult:
    """The twelve osp(1|2) relations and ``[X_f, X_g] = X_{{f,g}}`` on monomials."""
    cases = 0
    for f, g, c, h in COMMUTATION_TABLE:
        cases += 1
        got = contact_bracket(_H[f], _H[g])
        if got != _H[h] * c:
            return SuiteResult("commutation", FAIL, cases,
                               f"[X_{f}, X_{g}] gave {got}, expected {format_rational(c)}*X_{h}",
                               {"f": f, "g": g})
    monomials = [SuperFunction.monomial(a, odd=bool(e)) for a, e in product(range(4), range(2))]
    tests = [SuperFunction.monomial(a, odd=bool(e)) for a, e in product(range(5), range(2))]
    for f, g in product(monomials, monomials):
        h = contact_bracket(f, g)
        for t in tests:
            cases += 1
            lhs = field_commutator(f, g, t)
            if lhs != contact_apply(h, t):
                return SuiteResult("commutation", FAIL, cases, "operator bracket differs from {f,g}",
                                   {"f": str(f), "g": str(g), "test": str(t)})
    return SuiteResult("commutation", PASS, cases)


def action_suite(ws: WeightSystem, rng: random.Random, samples: int = 5) -> SuiteResult:
    """Closed action formula against the composition oracle."""
    hams = list(OSP_HAMILTONIANS) + [SuperFunction.monomial(3), SuperFunction.monomial(2, odd=True)]
    cases = 0
    for _ in range(samples):
        A = random_operator(rng, ws.n, ws.order2, ws.lambdas, ws.mu)
        for h in hams:
            cases += 1
            closed = lie_operator_closed(h, A)
            oracle = lie_operator_oracle(h, A)
            if closed != oracle:
                return SuiteResult("action-closed-vs-oracle", FAIL, cases, f"Hamiltonian {h}",
                                   {"hamiltonian": str(h), "operator": operator_to_json(A)})
    return SuiteResult("action-closed-vs-oracle", PASS, cases)


def _minimal_failing_term(A: NaryOperator, table: CoefficientTable, f) -> NaryOperator:
    """A single-coefficient piece of ``A`` that still breaks equivariance (the map is linear)."""
    for idx, a in sorted(A.coeffs.items(), key=_graded_key):
        single = A.with_coeffs({idx: a})
        if symbol_map(lie_operator_closed(f, single), table) != lie_symbol(f, symbol_map(single, table)):
            return single
    return A


def equivariance_suite(ws: WeightSystem, rng: random.Random, samples: int = 3,
                       table: CoefficientTable | None = None, name: str = "equivariance") -> SuiteResult:
    if first_resonant_pivot(ws.delta, ws.order2) is not None:
        return SuiteResult(name, RESONANT)
    table = table or gamma_table(ws.lambdas, ws.mu, ws.order2)
    cases = 0
    for _ in range(samples):
        A = random_operator(rng, ws.n, ws.order2, ws.lambdas, ws.mu)
        for fname, f in zip(OSP_NAMES, osp_generators()):
            cases += 1
            lhs = symbol_map(lie_operator_closed(f, A), table)
            rhs = lie_symbol(f, symbol_map(A, table))
            if lhs != rhs:
                bad = _minimal_failing_term(A, table, f)
                return SuiteResult(name, FAIL, cases, f"generator X_{fname}",
                                   {"generator": fname, "operator": operator_to_json(bad)})
    return SuiteResult(name, PASS, cases)


def recursion_suite(ws: WeightSystem) -> SuiteResult:
    if first_resonant_pivot(ws.delta, ws.order2) is not None:
        return SuiteResult("closed-form-vs-recursion", RESONANT)
    closed = gamma_table(ws.lambdas, ws.mu, ws.order2)
    rec = solve_varpi(ws.lambdas, ws.delta, ws.order2)
    cases = 0
    for key in closed.pairs():
        cases += 1
        if closed[key] != rec[key]:
            s, i = key
            return SuiteResult("closed-form-vs-recursion", FAIL, cases, "entry differs",
                               {"s": list(s), "i": list(i), "closed": format_rational(closed[key]),
                                "recursion": format_rational(rec[key])})
    return SuiteResult("closed-form-vs-recursion", PASS, cases)


def roundtrip_suite(ws: WeightSystem, rng: random.Random, samples: int = 3) -> SuiteResult:
    if first_resonant_pivot(ws.delta, ws.order2) is not None:
        return SuiteResult("roundtrip", RESONANT)
    gamma_t = gamma_table(ws.lambdas, ws.mu, ws.order2)
    beta_t = invert_gamma(gamma_t)
    cases = 0
    for _ in range(samples):
        cases += 1
        A = random_operator(rng, ws.n, ws.order2, ws.lambdas, ws.mu)
        back = quantize(symbol_map(A, gamma_t), beta_t)
        if back != A:
            return SuiteResult("roundtrip", FAIL, cases, first_difference(A, back),
                               {"operator": operator_to_json(A)})
        cases += 1
        P = random_symbol(rng, ws.n, ws.order2, ws.delta)
        again = symbol_map(quantize(P, beta_t), gamma_t)
        if again != P:
            return SuiteResult("roundtrip", FAIL, cases, "symbol_map(quantize(P)) != P",
                               {"symbol": symbol_to_json(P)})
    return SuiteResult("roundtrip", PASS, cases)


def first_difference(A: NaryOperator, B: NaryOperator) -> str:
    for idx in sorted(set(A.coeffs) | set(B.coeffs), key=lambda i: (sum(i), tuple(-v for v in i))):
        if A.coeff(idx) != B.coeff(idx):
            return f"coefficient {idx}: expected {A.coeff(idx)}, got {B.coeff(idx)}"
    return "operators differ in shape"


def flip_off_diagonal(table: CoefficientTable) -> CoefficientTable:
    """Mutation used as a negative control: negate every off-diagonal entry."""
    entries = {k: (v if k[0] == k[1] else -v) for k, v in table.entries.items()}
    return CoefficientTable(table.kind, table.n, table.order2, table.lambdas, table.mu, entries)


def run_suites(systems: Sequence[WeightSystem], seed: int, inject_sign_flip: bool = False) -> list[dict]:
    """Run every suite for each weight system; one report block per system."""
    rng = random.Random(seed)
    blocks = []
    common = commutation_suite()
    for ws in systems:
        results = [common, action_suite(ws, rng), recursion_suite(ws)]
        table = None
        if inject_sign_flip and first_resonant_pivot(ws.delta, ws.order2) is None:
            table = flip_off_diagonal(gamma_table(ws.lambdas, ws.mu, ws.order2))
        results.append(equivariance_suite(ws, rng, table=table))
        results.append(roundtrip_suite(ws, rng))
        blocks.append({"weights": ws.header(), "results": [r.as_dict() for r in results],
                       "ok": all(r.ok for r in results)})
    return blocks


def default_sweep(seed: int, max_n: int = 2, max_order2: int = 2) -> list[WeightSystem]:
    rng = random.Random(seed)
    return [random_weights(rng, n, o2) for n in range(1, max_n + 1) for o2 in range(max_order2 + 1)]


def parse_lambdas(text: str) -> tuple:
    return tuple(rational(part.strip()) for part in text.split(",") if part.strip())
