import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barnesbeta.errors import DomainError
from barnesbeta.sampling import RngStream, mc_mellin
from barnesbeta.selberg import (
    BETA22_METHODS,
    CRITICAL_KINDS,
    SELBERG_KINDS,
    MasterParams,
    SelbergParams,
    beta22_delta_cumulant,
    beta22_delta_mellin,
    beta22_delta_params,
    critical_identity_residual,
    critical_infinite_product,
    critical_mellin,
    critical_moment,
    levy_route_cumulant,
    master_factor_mellin,
    master_mellin,
    master_sample,
    numerical_cumulant,
    reduced_mellin,
    selberg_identity_residual,
    selberg_infinite_product,
    selberg_mellin,
    selberg_moment,
    selberg_sample,
)
from barnesbeta.xi import c2_mellin

# mpmath oracles (30 digits): Gamma_2(.|1,2) from Hurwitz derivatives, G from mpmath.barnesg
SELBERG_TAU2 = {0.5: 0.678770757275135517607373453816, -1.0: 9.2592291586200600760525249187}
CRITICAL = {0.5: 1.15112158264602642327300671761,
            -0.5 + 0.3j: 1.41296818506436204606252365872 - 2.06694194164104561095186789995j}
BETA22_HALF_AT_03 = 0.806547662963206402466439671919


def test_selberg_mpmath_oracle():
    p = SelbergParams(2.0, 0.1, 0.1)
    for q, ref in SELBERG_TAU2.items():
        assert selberg_mellin(p, q) == pytest.approx(ref, rel=1e-11)


def test_selberg_normalization():
    p = SelbergParams(1.5)
    assert selberg_mellin(p, 0.0) == 1.0
    assert selberg_mellin(p, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert selberg_moment(p, 1) == pytest.approx(1.0, rel=1e-14)


def test_selberg_negative_moments():
    p = SelbergParams(1.5)
    for l in (1, 2):
        assert selberg_mellin(p, -float(l)) == pytest.approx(selberg_moment(p, l, -1), rel=1e-8)
    # l = 1 at tau = 2: Gamma(2 + 3/2) Gamma(1/2) / (Gamma(3/2)^2 Gamma(1))
    q = SelbergParams(2.0)
    ref = math.gamma(3.5) * math.gamma(0.5) / math.gamma(1.5) ** 2
    assert selberg_moment(q, 1, -1) == pytest.approx(ref, rel=1e-13)


def test_selberg_positive_moment_two_routes():
    p = SelbergParams(3.0, 0.2, -0.1)
    assert selberg_mellin(p, 2.0) == pytest.approx(selberg_moment(p, 2), rel=1e-9)
    with pytest.raises(DomainError):
        selberg_moment(p, 3)


def test_selberg_domain():
    with pytest.raises(DomainError):
        selberg_mellin(SelbergParams(0.8), 0.5)
    with pytest.raises(DomainError):
        selberg_mellin(SelbergParams(1.5), 1.6)
    with pytest.raises(DomainError):
        SelbergParams(2.0, -0.6)


@pytest.mark.parametrize("kind", SELBERG_KINDS)
def test_selberg_identities(kind):
    p = SelbergParams(2.0, 0.1, 0.1)
    limit = 1e-6 if kind == "infinite_product" else 1e-7
    assert selberg_identity_residual(kind, p).residual < limit


def test_involution_fixed_point():
    assert selberg_identity_residual("involution", SelbergParams(1.0, 0.1, 0.1)).residual == 0


def test_infinite_product_value():
    p = SelbergParams(1.5, 0.1, 0.2)
    value, err = selberg_infinite_product(p, 0.3)
    assert value == pytest.approx(selberg_mellin(p, 0.3), rel=1e-7)


def test_reduced_mellin_below_one():
    p = SelbergParams(0.5, 0.2, 0.2)
    assert reduced_mellin(p, 0.0) == 1.0
    assert math.isfinite(reduced_mellin(p, 0.2))


def test_master_factorization():
    m = MasterParams(1.0, 2.0, 3.0, 4.0)
    for q in (0.5, -0.7, 0.3 + 0.4j):
        assert abs(master_mellin(m, q) - master_factor_mellin(m, q)) < 1e-12 * abs(master_mellin(m, q))
    assert master_mellin(m, 0.5) == pytest.approx(0.262813858986325, rel=1e-11)


def test_master_factors_degenerate():
    m = MasterParams(1.0, 1.0, 1.0, 1.0)
    f = m.factors()
    assert f[0] is None and f[2] is None
    with pytest.raises(DomainError):
        MasterParams(1.0, 2.0, 0.5, 0.5).factors()


def test_critical_values():
    assert critical_mellin(0.0) == 1.0
    assert critical_mellin(-1.0) == pytest.approx(24.0, rel=1e-12)
    assert critical_mellin(-2.0) == pytest.approx(21600.0, rel=1e-12)
    assert critical_moment(1) == 24 and critical_moment(2) == 21600
    for q, ref in CRITICAL.items():
        assert abs(critical_mellin(q) - ref) < 1e-11 * abs(ref)


def test_critical_pole_at_one():
    r = [(1 - q) * critical_mellin(q) for q in (0.999, 0.9999)]
    assert r[0] == pytest.approx(r[1], rel=1e-2) and r[1] > 0


@pytest.mark.parametrize("kind", CRITICAL_KINDS)
def test_critical_identities(kind):
    limit = 1e-6 if kind == "infinite_product" else 1e-10
    assert critical_identity_residual(kind).residual < limit


def test_critical_infinite_product():
    value, _ = critical_infinite_product(-0.5)
    assert value == pytest.approx(critical_mellin(-0.5), rel=1e-7)


def test_beta22_delta_routes():
    assert beta22_delta_mellin(0.3, 0.5, "barnes_g") == pytest.approx(BETA22_HALF_AT_03, rel=1e-11)
    for m in BETA22_METHODS:
        assert beta22_delta_mellin(0.3, 0.5, m) == pytest.approx(BETA22_HALF_AT_03, rel=1e-9)
    assert beta22_delta_params(0.5).b == (0.5, 0.5)
    with pytest.raises(DomainError):
        beta22_delta_mellin(-0.6, 0.5, "sech2")


def test_cumulant_at_half():
    # kappa_2(1/2) is the removable 0/0 point; it equals 4 E[C_2^{-1}] = 4 log 2
    assert beta22_delta_cumulant(2, 0.5) == pytest.approx(4 * math.log(2.0), rel=1e-12)
    assert c2_mellin(-1.0) == pytest.approx(math.log(2.0), rel=1e-12)
    assert beta22_delta_cumulant(3, 0.5) == pytest.approx(13.15947253478581, rel=1e-10)


@pytest.mark.parametrize("delta", [0.4, 0.5, 0.6])
@pytest.mark.parametrize("n", [2, 3])
def test_cumulant_bridge(n, delta):
    series = beta22_delta_cumulant(n, delta)
    assert abs(series - numerical_cumulant(beta22_delta_params(delta), n)) < 1e-4
    assert series == pytest.approx(levy_route_cumulant(delta, n), rel=1e-10)


def test_cumulant_domain():
    with pytest.raises(DomainError):
        beta22_delta_cumulant(2, 1.2)


def test_selberg_sample_moment():
    p = SelbergParams(1.5)
    gen = RngStream(77).generator()
    s = mc_mellin(lambda n: selberg_sample(p, gen, n), -1.0, 200_000)
    assert abs(s.mean - selberg_moment(p, 1, -1)) < 4 * s.stderr


def test_master_sample_moment():
    m = MasterParams(1.0, 2.0, 3.0, 4.0)
    gen = RngStream(78).generator()
    s = mc_mellin(lambda n: master_sample(m, gen, n), 0.5, 200_000)
    assert abs(s.mean - master_mellin(m, 0.5)) < 4 * s.stderr


@given(st.floats(1.1, 4.0), st.floats(-0.2, 0.5), st.floats(-0.2, 0.5), st.floats(-1.5, 0.9))
@settings(max_examples=20, deadline=None)
def test_funceq_tau_property(tau, l1, l2, q):
    p = SelbergParams(tau, l1, l2)
    assert selberg_identity_residual("funceq_tau", p, q_grid=(q,)).residual < 1e-7


@given(st.floats(0.5, 3.0), st.floats(0.0, 0.4), st.floats(-1.0, 0.4))
@settings(max_examples=20, deadline=None)
def test_involution_property(tau, lam, q):
    p = SelbergParams(tau, lam, lam)
    assert selberg_identity_residual("involution", p, q_grid=(q,)).residual < 1e-7


@given(st.floats(-2.0, 0.9))
@settings(max_examples=20, deadline=None)
def test_critical_factorization_property(q):
    assert critical_mellin(q) == pytest.approx(np.real(critical_mellin(q)), rel=1e-14)
    assert critical_identity_residual("factorization", q_grid=(q,)).residual < 1e-9
