import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barnesbeta.errors import DomainError
from barnesbeta.mellin import (
    BETA_KINDS,
    BarnesBetaParams,
    beta_identity_residual,
    eta,
    eta_barnes_product,
    eta_shintani_product,
    lattice_multiplicity,
    levy_cumulant,
    levy_density,
    levy_exponent,
    log_eta,
    mass_at_one,
    moment_barnes_product,
    moment_int,
    moment_pochhammer22,
    moment_unit_periods,
    s_operator,
    sn_log_gamma,
)

P01 = BarnesBetaParams((), 1.0, (1.0,))
P02 = BarnesBetaParams((), 1.0, (1.0, 1.0))
P12 = BarnesBetaParams((1.0,), 1.0, (1.0, 2.0))
P22 = BarnesBetaParams((1.0, 2.0), 1.0, (1.0, 1.0))

# four-Gamma_2 ratio with L_2(.|1,2) from mpmath Hurwitz derivatives, 30 digits
ETA22_HALF = 0.762759763501813188062325980963


def test_normalization():
    for p in (P01, P02, P12, P22):
        assert eta(p, 0.0).value == pytest.approx(1.0, abs=1e-15)


def test_m0n1_closed_form():
    for q in (0.3, 1.0, 2.5, -0.4, 0.5 + 1.0j):
        assert abs(eta(P01, q).value - (q + 2) / (2 * (q + 1))) < 1e-14


def test_m2n2_worked_example():
    assert eta(P22, 1.0).value.real == pytest.approx(2.0 / math.pi, rel=1e-12)
    assert eta(P22, 0.5).value.real == pytest.approx(ETA22_HALF, rel=1e-12)
    v = eta(P22, 1.0)
    assert v.in_strip and v.est_error < 1e-10


def test_log_eta_consistency():
    val, err = log_eta(P12, 0.7)
    assert abs(np.exp(val) - eta(P12, 0.7).value) < 1e-14 and err >= 0


def test_s_operator_on_polynomials():
    b = (0.5, 1.3, 2.0)
    assert abs(s_operator(lambda x: 3.0, 0.7, 1.0, b)) < 1e-14
    for n in (1, 2):
        assert abs(s_operator(lambda x: x**n, 0.7, 1.0, b)) < 1e-12
    cube = [s_operator(lambda x: x**3, q, 1.0, b) for q in (0.0, 0.7, 2.4)]
    assert max(cube) - min(cube) < 1e-11


def test_s_operator_repeated_b_entries():
    h = lambda x: math.log(x)  # noqa: E731
    direct = h(1.0) - 2 * h(2.0) + h(3.0)
    assert s_operator(h, 0.0, 1.0, (1.0, 1.0)) == pytest.approx(direct, rel=1e-14)


def test_levy_exponent_examples():
    assert levy_exponent(P01, 0.0) == 0
    for q in (0.5, -0.7):
        assert abs(np.exp(levy_exponent(P01, q)) - eta(P01, -q).value) < 1e-10
    # total mass log 2: the exponent tends to -log 2 as q -> -infinity
    assert levy_exponent(P01, -200.0).real == pytest.approx(-math.log(2.0), abs=1e-2)
    with pytest.raises(DomainError):
        levy_exponent(P01, 1.5)


def test_levy_density_positive():
    t = np.geomspace(1e-3, 30.0, 50)
    for p in (P01, P12, P22):
        assert np.all(levy_density(p, t) > 0)


def test_first_cumulant_is_log_derivative():
    h = 1e-5
    deriv = -(math.log(eta(P12, h).value.real) - math.log(eta(P12, -h).value.real)) / (2 * h)
    assert levy_cumulant(P12, 1) == pytest.approx(deriv, rel=1e-7)


def test_mass_at_one_anchors():
    for method in ("quadrature", "sn_formula", "product"):
        assert mass_at_one(P01, method) == pytest.approx(0.5, abs=1e-10)
        assert mass_at_one(P02, method) == pytest.approx(0.75, abs=1e-10)
    vals = [mass_at_one(P12, m) for m in ("quadrature", "sn_formula", "product")]
    assert max(vals) - min(vals) < 1e-6
    with pytest.raises(DomainError):
        mass_at_one(P22)


def test_three_routes_m2n2():
    for q in (0.5, 1.0, 0.5 + 0.5j):
        direct = eta(P22, q).value
        assert abs(eta_shintani_product(P22, q)[0] - direct) < 1e-5 * abs(direct)
        assert abs(eta_shintani_product(P22, q, i=1)[0] - direct) < 1e-5 * abs(direct)
        assert abs(eta_barnes_product(P22, q)[0] - direct) < 1e-4 * abs(direct)


def test_barnes_product_m0_is_exact():
    value, err, _ = eta_barnes_product(P01, 0.8)
    assert abs(value - (0.8 + 2) / (2 * 1.8)) < 1e-14


def test_lattice_multiplicity():
    assert lattice_multiplicity(0, 2) == 1
    assert [lattice_multiplicity(k, 2) for k in range(1, 21)] == [k + 1 for k in range(1, 21)]
    for M in (1, 2, 3):
        for k in range(8):
            assert lattice_multiplicity(k, M) == math.comb(k + M - 1, M - 1)


def test_integer_moments():
    assert moment_int(BarnesBetaParams((1.0,), 1.0, (1.0,)), 1) > 0
    tau = 2.0
    b0, b1, b2 = 1.0, 1.0, 1.0
    expected = math.gamma((b0 + b1) / tau) * math.gamma((b0 + b2) / tau) / (
        math.gamma(b0 / tau) * math.gamma((b0 + b1 + b2) / tau)
    )
    p = BarnesBetaParams((tau, 1.0), b0, (b1, b2))
    assert moment_int(p, 1, i=1) == pytest.approx(expected, rel=1e-10)
    for k in (1, 2, 3):
        assert moment_int(P22, k) == pytest.approx(eta(P22, float(k)).value.real, rel=1e-9)


def test_negative_moment():
    p = BarnesBetaParams((1.0, 1.0), 2.5, (1.0, 1.0))
    assert moment_int(p, 2, sign=-1) == pytest.approx(eta(p, -2.0).value.real, rel=1e-9)
    with pytest.raises(DomainError):
        moment_int(P22, 1, sign=-1)


def test_moment_alternatives():
    p = BarnesBetaParams((1.0, 1.0), 1.0, (1.0, 1.5))
    for n in (1, 2, 3):
        ref = eta(p, float(n)).value.real
        assert moment_unit_periods(p, n) == pytest.approx(ref, rel=1e-9)
        assert moment_pochhammer22(1.0, 1.0, 1.5, n) == pytest.approx(ref, rel=1e-9)
        assert moment_barnes_product(p, n) == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("kind", [k for k in BETA_KINDS if k != "reduction"])
def test_identities_m2n2(kind):
    assert beta_identity_residual(kind, P22).residual < 1e-7


def test_reduction_identity():
    p = BarnesBetaParams((1.0, 1.0), 1.0, (2.0, 0.7))
    assert beta_identity_residual("reduction", p).residual < 1e-7
    with pytest.raises(DomainError):
        beta_identity_residual("reduction", P12.replace(b=(1.5, 2.2)))


def test_scaling_trivial():
    assert beta_identity_residual("scaling", P12, kappa=1.0).residual == 0


def test_bad_params():
    with pytest.raises(DomainError):
        BarnesBetaParams((1.0,), -1.0, (1.0,))
    with pytest.raises(DomainError):
        BarnesBetaParams((1.0,), 1.0, (0.0,))


@given(st.floats(-0.9, 3.0))
@settings(max_examples=25, deadline=None)
def test_m0n1_property(q):
    assert eta(P01, q).value.real == pytest.approx((q + 2) / (2 * (q + 1)), rel=1e-12)


@given(st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.floats(0.1, 2.0))
@settings(max_examples=15, deadline=None)
def test_mellin_is_log_convex_and_decreasing(b1, b2, q):
    # beta lives on (0, 1]: E[beta^q] decreases in q and is log-convex
    p = BarnesBetaParams((1.0,), 1.0, (b1, b2))
    f = [math.log(eta(p, x).value.real) for x in (q, q + 0.2, q + 0.4)]
    assert f[1] < f[0] and f[0] + f[2] - 2 * f[1] >= -1e-10


@given(st.floats(0.2, 1.5))
@settings(max_examples=10, deadline=None)
def test_sn_log_gamma_matches_eta(q):
    v, _ = sn_log_gamma(P12.a, q, P12.b0, P12.b)
    v0, _ = sn_log_gamma(P12.a, 0.0, P12.b0, P12.b)
    assert abs(np.exp(v - v0) - eta(P12, q).value) < 1e-12
