import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barnesbeta.errors import DomainError, PoleError
from barnesbeta.mellin import mass_at_one
from barnesbeta.sampling import RngStream
from barnesbeta.xi import (
    TDeltaParams,
    beta_m_delta,
    c2_mellin,
    delta_limit_extrapolation,
    log_xi,
    s2_delta_transform,
    s2_mellin,
    sinh_factor,
    t_delta_cumulants,
    t_delta_functional_residual,
    t_delta_moments,
    t_delta_rhs,
    t_delta_sample,
    t_laplace,
    theta,
    theta_minus_one,
    xi,
    zeta,
)

# mpmath at 30 digits
ZETA = {0.5: -1.46035450880958681289, -2.5: 0.00851692877785033054, 3.0: 1.20205690315959428540}
ZETA_CRITICAL_LINE = (0.5 + 14j, 0.022241142609993589246 - 0.103258123266450057902j)
XI = {0.5: 0.49712077818831410991, 3.7: 0.62862134144309604861, 10.0: 3.5326947738560629525}
THETA_1 = 1.08643481121330801458
THETA_HALF = 1.41949548808376612336
C2_HALF = 1.36048381208101723295
S2_07 = 0.738466082466326161460


def test_zeta_values():
    assert zeta(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert zeta(0.0) == -0.5
    assert zeta(-4.0) == 0.0
    for s, ref in ZETA.items():
        assert zeta(s) == pytest.approx(ref, rel=1e-12)
    s, ref = ZETA_CRITICAL_LINE
    assert abs(zeta(s) - ref) < 1e-12
    with pytest.raises(PoleError):
        zeta(1.0)


def test_xi_values():
    assert xi(2.0) == pytest.approx(math.pi / 6, rel=1e-14)
    assert xi(0.0) == 0.5 and xi(1.0) == 0.5
    for s, ref in XI.items():
        assert xi(s) == pytest.approx(ref, rel=1e-12)
    assert log_xi(3.7) == pytest.approx(math.log(XI[3.7]), rel=1e-12)


def test_theta_values():
    assert theta(1.0) == pytest.approx(THETA_1, rel=1e-15)
    assert theta(0.5) == pytest.approx(THETA_HALF, rel=1e-14)
    assert abs(theta(1.0, 10) - theta(1.0)) < 1e-8
    assert theta_minus_one(20.0) == pytest.approx(2 * math.exp(-20 * math.pi), rel=1e-12)
    with pytest.raises(DomainError):
        theta(0.0)


def test_theta_vectorised():
    t = np.array([0.1, 0.7, 3.0])
    np.testing.assert_allclose(theta(t), [theta(x) for x in t], rtol=1e-15)


def test_beta_m_delta_params():
    p = beta_m_delta(1, 0.3)
    h = math.pi**2 / 2
    assert p.a == pytest.approx((h, h))
    assert p.b == pytest.approx((math.pi**2,) * 3)
    assert p.b0 == 0.3


def test_atom_decreases_in_M():
    atoms = [mass_at_one(beta_m_delta(M, 1.0)) for M in (1, 2, 3)]
    assert atoms[0] > atoms[1] > atoms[2] > 0


def test_c2_values():
    assert c2_mellin(0.0) == pytest.approx(1.0, rel=1e-14)
    assert c2_mellin(-1.0) == pytest.approx(math.log(2.0), rel=1e-12)
    assert c2_mellin(1.0) == pytest.approx(7.5 * (2 / math.pi) ** 2 * xi(4.0), rel=1e-13)
    assert c2_mellin(0.5) == pytest.approx(C2_HALF, rel=1e-12)
    z = c2_mellin(0.3 + 0.4j)
    assert abs(z.conjugate() - c2_mellin(0.3 - 0.4j)) < 1e-15


def test_s2_values():
    assert s2_mellin(0.7) == pytest.approx(S2_07, rel=1e-12)
    assert s2_mellin(0.0) == pytest.approx(1.0, rel=1e-14)


def test_s2_delta_laplace():
    assert s2_delta_transform("laplace_closed", 0.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    a = s2_delta_transform("laplace_closed", 1.0, 0.5)
    b = s2_delta_transform("laplace_levy", 1.0, 0.5)
    assert abs(a - b) < 1e-6
    # delta = 0 reduces to the sinh^{-2} transform
    assert s2_delta_transform("laplace_closed", 1.0, 0.0) == pytest.approx(
        (math.sqrt(2) / math.sinh(math.sqrt(2))) ** 2, rel=1e-14
    )


def test_s2_delta_mellin_series():
    assert s2_delta_transform("mellin_series", 0.0, 0.3) == pytest.approx(1.0, rel=1e-12)
    n = np.arange(1, 200_001, dtype=float)
    mean = float(np.sum(2 / (math.pi**2 * n**2 / 2 + 0.3)))
    assert s2_delta_transform("mellin_series", 1.0, 0.3) == pytest.approx(mean, rel=1e-5)
    assert s2_delta_transform("mellin_series", 0.7, 0.0) == pytest.approx(S2_07, rel=1e-12)
    with pytest.raises(DomainError):
        s2_delta_transform("mellin_series", 1.0, 5.0)


def test_sinh_factor_small_delta():
    assert sinh_factor(1e-14) == pytest.approx(1.0, rel=1e-12)


def test_t_laplace_matches_components():
    # T = S_2(delta) + Exp(delta)
    q, d = 0.8, 0.4
    expected = s2_delta_transform("laplace_closed", q, d) * d / (d + q)
    assert t_laplace(q, d) == pytest.approx(expected, rel=1e-7)


def test_t_delta_cumulants_and_sampler():
    p = TDeltaParams(0.1)
    k = t_delta_cumulants(p, 2)
    x = t_delta_sample(p, RngStream(31), 200_000)
    assert abs(x.mean() - k[0]) < 4 * math.sqrt(k[1] / x.size)
    assert np.var(x) == pytest.approx(k[1], rel=0.02)


def test_t_delta_tail_mean():
    p = TDeltaParams(0.2, n_terms=100)
    n = np.arange(101, 2_000_001, dtype=float)
    # direct sum plus its integral remainder 4/(pi^2 (N + 1/2))
    ref = float(np.sum(2 / (math.pi**2 * n**2 / 2 + 0.2))) + 4 / (math.pi**2 * (n[-1] + 0.5))
    assert p.tail_mean() == pytest.approx(ref, rel=1e-8)
    with pytest.raises(DomainError):
        TDeltaParams(0.1, n_terms=10)


@pytest.mark.parametrize("q", [1, 2])
def test_t_delta_exact_residual(q):
    assert t_delta_functional_residual(q, 0.1, method="exact").residual < 1e-8


def test_t_delta_rhs_values():
    assert t_delta_rhs(1, 0.1) == pytest.approx(0.6579437707549504, rel=1e-12)
    assert t_delta_rhs(2, 0.1) == pytest.approx(0.5184915695371147, rel=1e-12)


def test_delta_limit_exact_moments():
    deltas = (0.2, 0.1, 0.05)
    vals = [t_delta_moments(TDeltaParams(d, n_terms=200_000), 1)[1] - 1 / d for d in deltas]
    c0, _ = delta_limit_extrapolation(vals, [1e-6] * 3, deltas)
    assert c0 == pytest.approx(2 / 3, abs=2e-3)


def test_extrapolation_of_a_line():
    c0, se = delta_limit_extrapolation([1.2, 1.1, 1.05], [0.01] * 3, [0.2, 0.1, 0.05])
    assert c0 == pytest.approx(1.0, abs=1e-12) and se > 0


@given(st.floats(-6.0, 7.0))
@settings(max_examples=40, deadline=None)
def test_xi_symmetry_property(s):
    assert xi(s) == pytest.approx(xi(1.0 - s), rel=1e-12)
    assert xi(s) > 0


@given(st.floats(0.05, 10.0))
@settings(max_examples=40, deadline=None)
def test_theta_transform_property(t):
    assert theta(t) == pytest.approx(theta(1.0 / t) / math.sqrt(t), rel=1e-13)


@given(st.floats(0.01, 3.0), st.floats(0.05, 4.0))
@settings(max_examples=20, deadline=None)
def test_s2_delta_laplace_property(q, delta):
    a = s2_delta_transform("laplace_closed", q, delta)
    b = s2_delta_transform("laplace_levy", q, delta)
    assert abs(a - b) < 1e-6
