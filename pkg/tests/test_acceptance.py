"""Acceptance criteria, each with exact equality and a wall-clock budget.

Every test prints one line ``criterion N: PASS|FAIL ...`` to the terminal.
Run standalone with ``python tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from superquant.contact import OSP_HAMILTONIANS, contact_apply, contact_bracket, field_commutator
from superquant.equivariant import (
    ResonantDelta,
    beta_closed_table,
    gamma,
    gamma_table,
    invert_gamma,
    quantize,
    solve_varpi,
    symbol_map,
    truncation_table,
)
from superquant.nary import lie_operator_closed, lie_operator_oracle, random_operator, random_superfunction
from superquant.superfield import ONE, THETA, X, SuperFunction, d_x, dbar_power, sign
from superquant.supermath import super_binomial
from superquant.symbols import lie_symbol, random_symbol

SHAPES = [(n, order2) for n in (1, 2, 3) for order2 in range(5)]
GENERATORS = list(OSP_HAMILTONIANS)
H = {"1": ONE, "x": X, "x^2": SuperFunction.monomial(2), "θ": THETA, "xθ": SuperFunction.monomial(1, odd=True)}
HALF = Fraction(1, 2)
TWELVE = [
    ("1", "x^2", 2, "x"), ("θ", "θ", HALF, "1"), ("x", "1", -1, "1"), ("x", "x^2", 1, "x^2"),
    ("xθ", "xθ", HALF, "x^2"), ("x^2", "θ", -1, "xθ"), ("x", "θ", -HALF, "θ"), ("1", "xθ", 1, "θ"),
    ("1", "θ", 0, "1"), ("x", "xθ", HALF, "xθ"), ("x^2", "xθ", 0, "1"), ("xθ", "θ", HALF, "x"),
]


_capsys = None


def report(number, ok, elapsed, budget, detail=""):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    line = f"criterion {number}: {status} ({elapsed:.2f}s / budget {budget}s)"
    if detail:
        line += f" {detail}"
    if _capsys is None:
        print(line)
    else:
        with _capsys.disabled():
            print("\n" + line)
    return line


@pytest.fixture
def out(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def weight_systems(rng, n, order2, count):
    systems = []
    while len(systems) < count:
        lambdas = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n))
        mu = Fraction(rng.randint(-12, 12), rng.randint(1, 7))
        two_delta = 2 * (mu - sum(lambdas))
        if not (two_delta.denominator == 1 and 1 <= two_delta <= order2):
            systems.append((lambdas, mu))
    return systems


def test_criterion_1_osp_structure(out):
    start = time.perf_counter()
    ok = all(contact_bracket(H[f], H[g]) == H[h] * Fraction(c) for f, g, c, h in TWELVE)
    monomials = [SuperFunction.monomial(a, odd=bool(e)) for a, e in product(range(4), range(2))]
    tests = [SuperFunction.monomial(a, odd=bool(e)) for a, e in product(range(5), range(2))]
    pairs = 0
    for f, g in product(monomials, monomials):
        h = contact_bracket(f, g)
        pairs += 1
        ok = ok and all(field_commutator(f, g, t) == contact_apply(h, t) for t in tests)
    elapsed = time.perf_counter() - start
    report(1, ok, elapsed, 1, f"12 relations, {pairs} monomial pairs")
    assert ok
    assert elapsed < 1


def test_criterion_2_super_calculus(out):
    start = time.perf_counter()
    rng = random.Random(2)
    ok = True
    for _ in range(100):
        F = random_superfunction(rng, rng.randint(0, 1), max_degree=6)
        G = random_superfunction(rng, rng.randint(0, 1), max_degree=6)
        deriv = F
        for j in range(4):
            ok = ok and dbar_power(F, 2 * j) == deriv * sign(j)
            deriv = d_x(deriv)
        for j in range(5):
            rhs = sum((dbar_power(F, i) * dbar_power(G, j - i) * (super_binomial(j, i) * sign(F.parity * (j - i)))
                       for i in range(j + 1)), SuperFunction())
            ok = ok and dbar_power(F * G, j) == rhs
    elapsed = time.perf_counter() - start
    report(2, ok, elapsed, 1, "100 seeded pairs")
    assert ok
    assert elapsed < 1


def test_criterion_3_action_oracle(out):
    start = time.perf_counter()
    rng = random.Random(3)
    hams = GENERATORS + [SuperFunction.monomial(3), SuperFunction.monomial(2, odd=True)]
    cases = mismatches = 0
    for n, order2 in SHAPES:
        for _ in range(50):
            lambdas = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n))
            A = random_operator(rng, n, order2, lambdas, Fraction(rng.randint(-9, 9), rng.randint(1, 6)))
            for f in hams:
                cases += 1
                if lie_operator_closed(f, A) != lie_operator_oracle(f, A):
                    mismatches += 1
    elapsed = time.perf_counter() - start
    report(3, mismatches == 0, elapsed, 30, f"{cases} comparisons, {mismatches} mismatches")
    assert mismatches == 0
    assert elapsed < 30


def test_criterion_4_equivariance(out):
    start = time.perf_counter()
    rng = random.Random(4)
    cases = failures = 0
    for n, order2 in SHAPES:
        for lambdas, mu in weight_systems(rng, n, order2, 20):
            table = gamma_table(lambdas, mu, order2)
            A = random_operator(rng, n, order2, lambdas, mu)
            sigma_A = symbol_map(A, table)
            for f in GENERATORS:
                cases += 1
                if symbol_map(lie_operator_closed(f, A), table) != lie_symbol(f, sigma_A):
                    failures += 1
    elapsed = time.perf_counter() - start
    report(4, failures == 0, elapsed, 60, f"{cases} checks, {failures} failures")
    assert failures == 0
    assert elapsed < 60


def test_criterion_5_recursion(out):
    start = time.perf_counter()
    rng = random.Random(5)
    entries = mismatches = 0
    for n, order2 in SHAPES:
        for lambdas, mu in weight_systems(rng, n, order2, 20):
            closed = gamma_table(lambdas, mu, order2)
            rec = solve_varpi(lambdas, mu - sum(lambdas), order2)
            for key in closed.pairs():
                entries += 1
                mismatches += closed[key] != rec[key]
    l1, l2, delta = Fraction(3, 7), Fraction(-5, 2), Fraction(9, 4)
    spots = (gamma((1, 0), (0, 0), (l1, l2), delta) == -2 * l1 / (2 * delta - 1)
             and gamma((0, 1), (0, 0), (l1, l2), delta) == -2 * l2 / (2 * delta - 1))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and spots
    report(5, ok, elapsed, 5, f"{entries} entries, {mismatches} mismatches, spot values {'ok' if spots else 'wrong'}")
    assert ok
    assert elapsed < 5


def test_criterion_6_round_trip(out):
    start = time.perf_counter()
    rng = random.Random(6)
    failures = cases = 0
    beta_total = beta_agree = 0
    for n, order2 in SHAPES:
        for lambdas, mu in weight_systems(rng, n, order2, 20):
            g = gamma_table(lambdas, mu, order2)
            b = invert_gamma(g)
            A = random_operator(rng, n, order2, lambdas, mu)
            P = random_symbol(rng, n, order2, g.delta)
            cases += 2
            failures += quantize(symbol_map(A, g), b) != A
            failures += symbol_map(quantize(P, b), g) != P
            try:
                closed = beta_closed_table(lambdas, mu, order2)
            except ZeroDivisionError:
                continue
            for key in g.pairs():
                beta_total += 1
                beta_agree += closed[key] == b[key]
    elapsed = time.perf_counter() - start
    rate = beta_agree / beta_total if beta_total else 1.0
    report(6, failures == 0, elapsed, 30,
           f"{cases} round trips, {failures} failures; closed-form beta agreement {beta_agree}/{beta_total} ({rate:.1%})")
    assert failures == 0
    assert elapsed < 30


def test_criterion_7_resonance_boundary(out):
    start = time.perf_counter()
    ok = True
    checked = 0
    lam = (Fraction(2, 9), Fraction(-1, 3))
    for order2 in range(1, 7):
        for m in range(1, order2 + 1):
            p = max(0, 2 * m - 1 - order2)
            try:
                solve_varpi(lam, Fraction(m, 2), order2)
                ok = False
            except ResonantDelta as err:
                ok = ok and (err.ell, err.p) == (2 * m - 1 - p, p)
            checked += 1
        table = solve_varpi(lam, Fraction(order2 + 1, 2), order2)
        ok = ok and table[((0, 0), (0, 0))] == 1
    elapsed = time.perf_counter() - start
    report(7, ok, elapsed, 1, f"{checked} resonant shifts located")
    assert ok
    assert elapsed < 1


def test_criterion_8_negative_control(out):
    start = time.perf_counter()
    rng = random.Random(8)
    detected = 0
    shapes = [(n, order2) for n, order2 in SHAPES if order2 >= 1]
    for n, order2 in shapes:
        lambdas, mu = weight_systems(rng, n, order2, 1)[0]
        table = truncation_table(lambdas, mu, order2)
        A = random_operator(rng, n, order2, lambdas, mu, density=1.0)
        if any(symbol_map(lie_operator_closed(f, A), table) != lie_symbol(f, symbol_map(A, table))
               for f in GENERATORS):
            detected += 1
    elapsed = time.perf_counter() - start
    ok = detected == len(shapes)
    report(8, ok, elapsed, 1, f"truncation rejected in {detected}/{len(shapes)} shapes")
    assert ok
    assert elapsed < 1


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
