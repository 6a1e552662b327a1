import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barnesbeta.errors import DomainError
from barnesbeta.mellin import BarnesBetaParams, eta, levy_mass, mass_at_one
from barnesbeta.sampling import (
    DEFAULT_SEED,
    ELEMENTARY,
    MomentAccumulator,
    RngStream,
    jump_table,
    mc_mellin,
    product_tail_mean,
    run_streams,
    sample_beta,
    sample_beta_compound,
    sample_beta_product,
    sample_elementary,
    thread_count,
)

P01 = BarnesBetaParams((), 1.0, (1.0,))
P12 = BarnesBetaParams((1.0,), 1.0, (1.0, 2.0))
P22 = BarnesBetaParams((1.0, 2.0), 1.0, (1.0, 1.0))


def test_reproducible_streams():
    a = RngStream(7, 3).generator().random(5)
    b = RngStream(7, 3).generator().random(5)
    c = RngStream(7, 4).generator().random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert RngStream().seed == DEFAULT_SEED == 0xB41215
    with pytest.raises(DomainError):
        RngStream(-1)


def test_sampler_reproducible():
    x = sample_beta(P12, RngStream(5), 1000)
    y = sample_beta(P12, RngStream(5), 1000)
    np.testing.assert_array_equal(x, y)


def test_constant_sampler():
    s = mc_mellin(lambda n: np.ones(n), 1.0, 1000)
    assert s.mean == 1.0 and s.stderr == 0.0


def test_accumulator_merge_matches_batch():
    x = np.random.default_rng(1).normal(size=1001)
    whole = MomentAccumulator().update(x).stats()
    parts = MomentAccumulator().update(x[:300]).merge(MomentAccumulator().update(x[300:])).stats()
    assert parts.mean == pytest.approx(whole.mean, rel=1e-13)
    assert parts.variance == pytest.approx(whole.variance, rel=1e-12)
    assert whole.variance == pytest.approx(np.var(x, ddof=1), rel=1e-12)


def test_mc_beta01():
    gen = RngStream(11).generator()
    s = mc_mellin(lambda n: sample_beta(P01, gen, n), 1.0, 100_000)
    assert abs(s.mean - 0.75) < 3 * s.stderr


def test_mc_lognormal():
    gen = RngStream(12).generator()
    s = mc_mellin(lambda n: sample_elementary("lognormal", gen, n, sigma2=1.0), 1.0, 100_000)
    assert abs(s.mean - math.exp(0.5)) < 3 * s.stderr


@pytest.mark.parametrize(
    "law,kw,q,exact",
    [
        ("frechet", {"tau": 3.0}, 1.0, math.gamma(1 - 1 / 3.0)),
        ("pareto23", {}, 1.0, 2.0),
        ("beta00", {"b0": 2.0}, 1.0, 2.0 / 3.0),
        ("gamma2", {}, 1.0, 2.0),
        ("exp", {"rate": 4.0}, 1.0, 0.25),
    ],
)
def test_elementary_moments(law, kw, q, exact):
    gen = RngStream(13).generator()
    s = mc_mellin(lambda n: sample_elementary(law, gen, n, **kw), q, 100_000)
    assert abs(s.mean - exact) < 4 * s.stderr


def test_unknown_elementary():
    assert "frechet" in ELEMENTARY
    with pytest.raises(DomainError):
        sample_elementary("cauchy", None, 3)


def test_empirical_atom():
    n = 200_000
    x = sample_beta_compound(P12, RngStream(21), n)
    frac = float(np.mean(x == 1.0))
    p = mass_at_one(P12)
    assert abs(frac - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_jump_table_mass():
    table = jump_table(P12)
    assert table.lam == pytest.approx(levy_mass(P12), rel=1e-6)
    assert np.all(np.diff(table.cdf) >= 0)


def test_values_in_unit_interval():
    for p in (P01, P12, P22):
        x = sample_beta(p, RngStream(3), 10_000)
        assert np.all((x > 0) & (x <= 1))


def test_law_domain():
    with pytest.raises(DomainError):
        sample_beta(BarnesBetaParams((1.0, 1.0), 1.0, (1.0,)), None, 10)
    with pytest.raises(DomainError):
        sample_beta_product(P12, None, 10)


def test_product_tail_correction():
    small = product_tail_mean(P22, K=50)
    large = product_tail_mean(P22, K=150)
    assert 0 < large < small
    with pytest.warns(UserWarning):
        sample_beta_product(P22, RngStream(1), 10, K=5, tail_correction=False)


@pytest.mark.filterwarnings("ignore:product truncated")
def test_truncation_bias_shrinks_with_K():
    n = 100_000
    exact = -math.log(eta(P22, 1e-6).value.real) / 1e-6
    means = []
    for K in (20, 120):
        d = sample_beta_product(P22, RngStream(4), n, K=K, tail_correction=False)
        means.append(float(np.mean(-np.log(d.values))))
    assert abs(means[1] - exact) < abs(means[0] - exact)


def _coverage(p, q, reps=20, n=100_000):
    hits = 0
    exact = eta(p, q).value.real
    for r in range(reps):
        gen = RngStream(1000 + r).generator()
        s = mc_mellin(lambda m: sample_beta(p, gen, m), q, n)
        hits += abs(s.mean - exact) < 3 * s.stderr
    return hits


@pytest.mark.parametrize("p", [P01, P12, P22], ids=["M0N1", "M1N2", "M2N2"])
@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_replication_coverage(p, q):
    assert _coverage(p, q) >= 19


def test_run_streams_thread_independent(monkeypatch):
    def task(stream):
        return MomentAccumulator().update(stream.generator().random(1000))

    base = RngStream(9)
    monkeypatch.setenv("BARNESBETA_THREADS", "1")
    one = run_streams(task, base, 4)
    monkeypatch.setenv("BARNESBETA_THREADS", "3")
    assert thread_count() == 3
    three = run_streams(task, base, 4)
    assert one.mean == three.mean and one.m2 == three.m2


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_stream_children_distinct(seed, sid):
    s = RngStream(seed, sid)
    assert s.child(0) != s.child(1)
    np.testing.assert_array_equal(s.generator().random(3), RngStream(seed, sid).generator().random(3))
