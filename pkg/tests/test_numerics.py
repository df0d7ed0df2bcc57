import math

import pytest
from hypothesis import given, strategies as st

from harmonic_smile.errors import BracketNotFound, QuadratureError
from harmonic_smile.numerics import expand_bracket, integrate_interval, newton_bisect


def test_bracket_expands():
    lo, hi = expand_bracket(lambda x: x - 37.0)
    assert lo <= 37.0 <= hi


def test_bracket_respects_limit_and_domain():
    with pytest.raises(BracketNotFound):
        expand_bracket(lambda x: x - 100.0, limit=60)
    with pytest.raises(BracketNotFound):
        expand_bracket(lambda x: x - 5.0, domain=(-2.0, 2.0))


@given(st.floats(-50, 50))
def test_newton_bisect_cubic(c):
    f = lambda x: x**3 + x - c
    lo, hi = expand_bracket(f)
    x = newton_bisect(f, lambda x: 3 * x * x + 1, lo, hi)
    assert abs(f(x)) < 1e-12


def test_newton_bisect_bad_derivative_falls_back():
    x = newton_bisect(lambda x: math.tanh(x) - 0.5, lambda x: 0.0, -5, 5)
    assert x == pytest.approx(math.atanh(0.5), abs=1e-14)


def test_newton_bisect_needs_bracket():
    with pytest.raises(BracketNotFound):
        newton_bisect(lambda x: x - 3, lambda x: 1.0, -1, 1)


def test_integrate():
    assert integrate_interval(math.exp, 0, 1) == pytest.approx(math.e - 1, rel=1e-13)
    assert integrate_interval(math.exp, 1, 0) == pytest.approx(1 - math.e, rel=1e-13)
    assert integrate_interval(math.exp, 2, 2) == 0.0


def test_integrate_failure():
    with pytest.raises(QuadratureError):
        integrate_interval(lambda x: 1 / x if x else 1.0, -1, 1, limit=5)
