import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taubnut import dual
from taubnut.dual import Dual, derivative, partials, second_derivative


def central(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize(
    "f, df",
    [
        (lambda x: x * x * x, lambda x: 3 * x * x),
        (lambda x: 1 / x, lambda x: -1 / x**2),
        (lambda x: dual.sqrt(x), lambda x: 0.5 / math.sqrt(x)),
        (lambda x: dual.exp(2 * x), lambda x: 2 * math.exp(2 * x)),
        (lambda x: dual.cos(x) * dual.sin(x), lambda x: math.cos(2 * x)),
        (lambda x: dual.acos(x / 3), lambda x: -1 / math.sqrt(9 - x * x)),
        (lambda x: (x + 1) ** 3, lambda x: 3 * (x + 1) ** 2),
    ],
)
def test_first_derivative(f, df):
    for x in (0.3, 0.7, 1.9):
        assert derivative(f, x) == pytest.approx(df(x), rel=1e-14, abs=1e-14)


@given(st.floats(0.1, 5.0))
def test_matches_finite_difference(x):
    f = lambda y: dual.sqrt(y) * dual.exp(-y) / (1 + y * y)
    assert derivative(f, x) == pytest.approx(central(f, x), rel=1e-7, abs=1e-9)


def test_second_derivative_nested():
    f = lambda x: x**4 - 3 / x
    for x in (0.5, 2.0):
        assert second_derivative(f, x) == pytest.approx(12 * x * x - 6 / x**3, rel=1e-13)
    assert second_derivative(lambda x: dual.sin(x), 0.4) == pytest.approx(-math.sin(0.4), rel=1e-14)


def test_complex_exponential():
    # d/dx exp(i x^2) = 2 i x exp(i x^2)
    f = lambda x: dual.exp(1j * x * x)
    x = 0.8
    assert derivative(f, x) == pytest.approx(2j * x * cmath.exp(1j * x * x), rel=1e-14)


def test_partials_and_constants():
    assert partials(lambda a, b: a * b * b, 2.0, 3.0) == (9.0, 12.0)
    assert derivative(lambda x: 5.0, 1.0) == 0.0


def test_rsub_rdiv_neg():
    x = Dual(2.0, 1.0)
    y = 1 - x
    z = 4 / x
    assert (y.val, y.der) == (-1.0, -1.0)
    assert (z.val, z.der) == (2.0, -1.0)
    assert (-x).der == -1.0


def test_sqrt_negative_real_raises():
    with pytest.raises(ValueError):
        dual.sqrt(Dual(-1.0, 1.0))
