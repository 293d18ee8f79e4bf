import random
from fractions import Fraction

from superquant.equivariant import gamma_table
from superquant.verify import (
    FAIL,
    PASS,
    RESONANT,
    WeightSystem,
    action_suite,
    commutation_suite,
    default_sweep,
    equivariance_suite,
    flip_off_diagonal,
    parse_lambdas,
    recursion_suite,
    roundtrip_suite,
    run_suites,
)


def test_parse_lambdas():
    assert parse_lambdas("1/2, -3 ,0") == (Fraction(1, 2), Fraction(-3), Fraction(0))


def test_commutation_suite():
    r = commutation_suite()
    assert r.status == PASS and r.cases > 12


def test_suites_on_one_system():
    ws = WeightSystem((Fraction(1, 3), Fraction(-2)), Fraction(4, 5), 2)
    rng = random.Random(0)
    for suite in (action_suite, equivariance_suite, roundtrip_suite):
        assert suite(ws, rng).status == PASS
    assert recursion_suite(ws).status == PASS


def test_resonant_system_is_skipped():
    ws = WeightSystem((Fraction(0),), Fraction(1), 2)
    rng = random.Random(0)
    assert equivariance_suite(ws, rng).status == RESONANT
    assert roundtrip_suite(ws, rng).status == RESONANT
    assert recursion_suite(ws).status == RESONANT


def test_flipped_table_fails_with_single_term_counterexample():
    ws = WeightSystem((Fraction(1, 3), Fraction(-2)), Fraction(4, 5), 2)
    bad = flip_off_diagonal(gamma_table(ws.lambdas, ws.mu, ws.order2))
    r = equivariance_suite(ws, random.Random(1), table=bad)
    assert r.status == FAIL
    assert len(r.counterexample["operator"]["coeffs"]) == 1


def test_sweep_is_seeded():
    assert default_sweep(3) == default_sweep(3)
    blocks = run_suites(default_sweep(3), 3)
    assert all(b["ok"] for b in blocks)
