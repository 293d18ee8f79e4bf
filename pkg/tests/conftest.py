from fractions import Fraction

from hypothesis import settings, strategies as st

from superquant.superfield import SuperFunction

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_ints = st.integers(min_value=-5, max_value=5)
rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))
polys = st.lists(small_ints, min_size=0, max_size=5).map(lambda c: tuple(Fraction(v) for v in c))


@st.composite
def homogeneous(draw, parity=None):
    """A homogeneous superfunction; parity drawn when not given."""
    if parity is None:
        parity = draw(st.integers(0, 1))
    p = draw(polys)
    return SuperFunction((), p) if parity else SuperFunction(p, ())


superfunctions = st.builds(SuperFunction, polys, polys)


@st.composite
def non_resonant(draw, n, order2):
    """(lambdas, mu) with a non-resonant shift for the given order."""
    lambdas = tuple(draw(rationals) for _ in range(n))
    mu = draw(rationals)
    two_delta = 2 * (mu - sum(lambdas))
    if two_delta.denominator == 1 and 1 <= two_delta <= order2:
        mu += Fraction(1, 7)
    return lambdas, mu
