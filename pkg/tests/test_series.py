import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barnesbeta.errors import DomainError
from barnesbeta.series import (
    GammaParams,
    PowerSeries,
    bernoulli_coeffs,
    bernoulli_number,
    bernoulli_poly,
    kernel_series,
    series_exp,
    series_mul,
    series_of_factor,
)

periods = st.floats(0.3, 4.0)
points = st.floats(-2.0, 3.0)


def test_bernoulli_numbers_match_mpmath():
    for n in range(0, 40):
        assert float(bernoulli_number(n)) == pytest.approx(float(mpmath.bernoulli(n)), rel=1e-15, abs=1e-300)
    assert bernoulli_number(1) == Fraction(-1, 2)


def test_bernoulli_beyond_preload():
    # the cache grows on demand
    assert float(bernoulli_number(60)) == pytest.approx(float(mpmath.bernoulli(60)), rel=1e-14)


def test_factor_series_examples():
    np.testing.assert_allclose(series_of_factor(1.0, 0).coeffs, [1.0])
    np.testing.assert_allclose(series_of_factor(1.0, 2).coeffs, [1.0, 0.5, 1.0 / 12.0], rtol=1e-15)
    np.testing.assert_allclose(series_of_factor(2.0, 1).coeffs, [0.5, 0.5], rtol=1e-15)


def test_series_mul_examples():
    one = PowerSeries([1.0])
    np.testing.assert_allclose(series_mul(one, one).coeffs, [1.0])
    np.testing.assert_allclose(series_mul(PowerSeries([1, 1]), PowerSeries([1, 1])).coeffs, [1, 2])
    u = PowerSeries([1.0, 0.5, 1.0 / 12.0])
    v = PowerSeries([1.0, -1.0, 0.5])
    np.testing.assert_allclose(series_mul(u, v).coeffs, [1.0, -0.5, 1.0 / 12.0], rtol=1e-15)


def test_series_exp():
    np.testing.assert_allclose(series_exp(2.0, 4).coeffs, [2.0**n / math.factorial(n) for n in range(5)])


def test_b22_unit_periods():
    x = 0.37
    assert bernoulli_poly((1.0, 1.0), 2, x) == pytest.approx(x * x - 2 * x + 5.0 / 6.0, rel=1e-14)
    assert bernoulli_poly((1.0, 1.0), 2, 0.0) == pytest.approx(5.0 / 6.0, rel=1e-14)


def test_m0_and_m1_examples():
    a = (1.5, 2.0, 0.7)
    assert bernoulli_poly(a, 0, 1.3) == pytest.approx(1.0 / (1.5 * 2.0 * 0.7), rel=1e-14)
    assert bernoulli_poly((2.5,), 1, 0.8) == pytest.approx(0.5 - 0.8 / 2.5, rel=1e-14)


def test_m1_matches_classical_bernoulli_polynomials():
    # B_{1,m}(x|a) = a^{m-1} B_m(1 - x/a) = (-a)^m B_m(x/a)/a
    for a in (1.0, 2.0, 0.5):
        for m in range(6):
            x = 0.3
            expected = a ** (m - 1) * float(mpmath.bernpoly(m, 1 - x / a))
            assert bernoulli_poly((a,), m, x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_complex_argument():
    x = 0.4 + 0.9j
    a1, a2 = 1.0, 2.5
    closed = x * x / (a1 * a2) - x * (a1 + a2) / (a1 * a2) + (a1 * a1 + 3 * a1 * a2 + a2 * a2) / (6 * a1 * a2)
    assert abs(bernoulli_poly((a1, a2), 2, x) - closed) < 1e-13


def test_kernel_series_is_product_of_factors():
    out = kernel_series((1.0, 3.0), 5)
    ref = series_of_factor(1.0, 5) * series_of_factor(3.0, 5)
    np.testing.assert_allclose(out.coeffs, ref.coeffs, rtol=1e-15)


def test_bad_periods():
    with pytest.raises(DomainError):
        GammaParams((1.0, -1.0))
    with pytest.raises(DomainError):
        series_of_factor(0.0, 3)


@given(st.tuples(periods, periods), points, points)
@settings(max_examples=40, deadline=None)
def test_b22_closed_form_property(a, x, _):
    a1, a2 = a
    closed = x * x / (a1 * a2) - x * (a1 + a2) / (a1 * a2) + (a1 * a1 + 3 * a1 * a2 + a2 * a2) / (6 * a1 * a2)
    assert bernoulli_poly(a, 2, x) == pytest.approx(closed, rel=1e-12, abs=1e-12)


@given(st.lists(periods, min_size=1, max_size=3), points, points, st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_binomial_shift_property(a, x, y, m):
    lhs = bernoulli_poly(a, m, x + y)
    rhs = sum(math.comb(m, p) * bernoulli_poly(a, p, x) * (-y) ** (m - p) for p in range(m + 1))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


@given(st.lists(periods, min_size=1, max_size=2), points, st.integers(2, 3), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_multiplication_sum_property(a, w, k, m):
    M = len(a)
    lhs = sum(
        bernoulli_poly(a, m, w + sum(p * aj for p, aj in zip(ps, a)) / k)
        for ps in itertools.product(range(k), repeat=M)
    )
    rhs = k ** (M - m) * bernoulli_poly(a, m, k * w)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


@given(st.lists(periods, min_size=0, max_size=3), points)
@settings(max_examples=30, deadline=None)
def test_coefficients_are_scaled_polynomials(a, x):
    c = bernoulli_coeffs(a, x, 4).coeffs
    for m in range(5):
        assert c[m] * math.factorial(m) == pytest.approx(bernoulli_poly(a, m, x), rel=1e-12, abs=1e-12)
