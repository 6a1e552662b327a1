"""Monte-Carlo samplers for Barnes beta laws and the elementary factors.

``-log beta_{M,N}`` is compound Poisson when ``M < N``: a Poisson number
of jumps drawn from the normalised Levy density.  For ``M = N`` the law is
the infinite product of ``beta_{M-1,N}(a^_i, b0 + k a_i)`` over ``k >= 0``;
the first ``K + 1`` factors together are again one compound Poisson (with
Levy density ``rho(t) (1 - e^{-(K+1) a_i t})``) and the rest is replaced by
its mean of ``-log``.

Random numbers come from numpy's counter-based Philox generator keyed by
``(seed, stream_id)``, so parallel streams are reproducible regardless of
scheduling.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .mellin import BarnesBetaParams, levy_cumulant, levy_density, sn_log_gamma

DEFAULT_SEED = 0xB41215
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream ``(seed, stream_id)``."""

    seed: int = DEFAULT_SEED
    stream_id: int = 0

    def __post_init__(self):
        for v in (self.seed, self.stream_id):
            if not 0 <= int(v) <= _MASK64:
                raise DomainError("seed and stream_id must be 64-bit unsigned integers")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, k: int) -> "RngStream":
        return RngStream(self.seed, (self.stream_id * 1_000_003 + k + 1) & _MASK64)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None:
        return RngStream().generator()
    return RngStream(int(rng)).generator()


@dataclass(frozen=True)
class SampleStats:
    n: int
    mean: float
    variance: float
    stderr: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @classmethod
    def from_moments(cls, n: int, mean: float, m2: float) -> "SampleStats":
        var = m2 / (n - 1) if n > 1 else 0.0
        return cls(n, float(mean), float(var), math.sqrt(var / n))


class MomentAccumulator:
    """Streaming mean/variance (Welford updates, Chan merges)."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def update(self, values) -> "MomentAccumulator":
        x = np.asarray(values, dtype=float).ravel()
        if x.size == 0:
            return self
        other = MomentAccumulator()
        other.n = x.size
        other.mean = float(x.mean())
        other.m2 = float(np.sum((x - other.mean) ** 2))
        return self.merge(other)

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.n == 0:
            return self
        n = self.n + other.n
        delta = other.mean - self.mean
        self.mean += delta * other.n / n
        self.m2 += other.m2 + delta * delta * self.n * other.n / n
        self.n = n
        return self

    def stats(self) -> SampleStats:
        return SampleStats.from_moments(self.n, self.mean, self.m2)


def accumulator() -> MomentAccumulator:
    return MomentAccumulator()


# Jump tables


@dataclass(frozen=True)
class JumpTable:
    """Inverse-CDF table for a finite Levy density on ``(0, inf)``.

    ``cdf`` is normalised by the total mass ``lam`` (which includes the two
    tails outside ``[grid[0], grid[-1]]``), so it rises from
    ``low_mass/lam`` to ``1 - high_mass/lam`` across the grid.
    """

    grid: np.ndarray
    cdf: np.ndarray
    lam: float
    low_mass: float
    high_mass: float
    alpha: float
    decay: float
    density: Callable = None
    inverse: Callable = None

    @classmethod
    def build(cls, density, alpha: float, decay: float, lam_hint: float, points: int = 4096, tail_frac=1e-10):
        """``density ~ C t^{alpha-1}`` near 0 and ``~ e^{-decay t}/t`` at infinity."""
        t_s = 1e-9 / max(decay, 1.0)
        C = float(density(np.array([t_s]))[0]) * t_s ** (1.0 - alpha)
        t_min = min((alpha * tail_frac * lam_hint / C) ** (1.0 / alpha), 1e-3 / max(decay, 1.0))
        t_max = 1.0 / decay
        for _ in range(30):
            t_max = max(math.log(1.0 / (tail_frac * lam_hint * decay * t_max)) / decay, 2.0 / decay)
        t_max = max(t_max, 100 * t_min)
        grid = np.geomspace(t_min, t_max, points)
        x, w = np.polynomial.legendre.leggauss(8)
        lo, hi = grid[:-1], grid[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * x[None, :]
        pieces = half * (density(nodes.ravel()).reshape(nodes.shape) @ w)
        xs = 0.5 * t_min * (x + 1.0)
        low_mass = float(0.5 * t_min * (density(xs) @ w))
        tail_t = t_max + np.linspace(0, 60 / decay, 2001)[1:]
        high_mass = float(np.trapezoid(density(np.r_[t_max, tail_t]), np.r_[t_max, tail_t]))
        cum = np.r_[0.0, np.cumsum(pieces)]
        lam = low_mass + cum[-1] + high_mass
        cdf = (low_mass + cum) / lam
        keep = np.r_[True, np.diff(cdf) > 0]
        inverse = PchipInterpolator(cdf[keep], np.log(grid[keep]))
        return cls(grid, cdf, float(lam), low_mass, high_mass, float(alpha), float(decay), density, inverse)

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        u = gen.random(n)
        out = np.empty(n)
        lo_edge, hi_edge = self.cdf[0], self.cdf[-1]
        mid = (u >= lo_edge) & (u <= hi_edge)
        out[mid] = np.exp(self.inverse(u[mid]))
        low = u < lo_edge
        if np.any(low):
            # density ~ C t^{alpha-1} below the grid
            out[low] = self.grid[0] * (u[low] / lo_edge) ** (1.0 / self.alpha)
        high = np.flatnonzero(u > hi_edge)
        if high.size:
            out[high] = self._upper_tail(gen, high.size)
        return out

    def _upper_tail(self, gen, k):
        t0 = self.grid[-1]
        g0 = float(self.density(np.array([t0]))[0])
        res = np.empty(0)
        while res.size < k:
            t = t0 + gen.exponential(1.0 / self.decay, 2 * k)
            ratio = self.density(t) / (g0 * np.exp(-self.decay * (t - t0)))
            res = np.r_[res, t[gen.random(t.size) < np.minimum(ratio, 1.0)]]
        return res[:k]


def _compound_draws(gen, lam: float, table: JumpTable, n: int) -> np.ndarray:
    counts = gen.poisson(lam, n)
    total = int(counts.sum())
    sums = np.zeros(n)
    if total:
        jumps = table.sample(gen, total)
        idx = np.repeat(np.arange(n), counts)
        sums = np.bincount(idx, weights=jumps, minlength=n)
    return sums


@lru_cache(maxsize=64)
def _compound_setup(params: BarnesBetaParams):
    lam = sn_log_gamma(params.a, 0.0, params.b0, params.b)[0].real
    table = JumpTable.build(lambda t: levy_density(params, t), params.N - params.M, params.b0, lam)
    return lam, table


def jump_table(params: BarnesBetaParams) -> JumpTable:
    if not params.M < params.N:
        raise DomainError("compound-Poisson sampling needs M < N")
    return _compound_setup(params)[1]


def sample_beta_compound(params: BarnesBetaParams, rng, n: int) -> np.ndarray:
    """Draws of ``beta_{M,N}`` for ``M < N`` (values in ``(0, 1]``)."""
    if not params.M < params.N:
        raise DomainError("compound-Poisson sampling needs M < N")
    gen = as_generator(rng)
    lam, table = _compound_setup(params)
    return np.exp(-_compound_draws(gen, lam, table, int(n)))


@dataclass(frozen=True)
class ProductDraws:
    values: np.ndarray
    K: int
    i: int
    tail_mean: float
    correction_applied: bool


@lru_cache(maxsize=64)
def _product_setup(params: BarnesBetaParams, K: int, i: int):
    ai = params.a[i]
    shift = (K + 1) * ai
    # sum_{k<=K} S_N L_{M-1}(k a_i|a^_i, b) telescopes through the functional equation
    lam = (
        sn_log_gamma(params.a, 0.0, params.b0, params.b)[0]
        - sn_log_gamma(params.a, shift, params.b0, params.b)[0]
    ).real

    def density(t):
        return levy_density(params, t) * -np.expm1(-shift * t)

    table = JumpTable.build(density, 1.0, params.b0, lam)
    tail_mean = levy_cumulant(params.shift_b0(shift), 1)
    return lam, table, tail_mean


def product_tail_mean(params: BarnesBetaParams, K: int = 200, i: int | None = None) -> float:
    """``E[-log]`` of the factors ``k > K`` left out by the product sampler."""
    i = int(np.argmax(params.a)) if i is None else i
    return _product_setup(params, K, i)[2]


def sample_beta_product(
    params: BarnesBetaParams,
    rng,
    n: int,
    K: int = 200,
    tail_correction: bool = True,
    i: int | None = None,
) -> ProductDraws:
    """Approximate draws of ``beta_{M,M}`` from ``K + 1`` product factors."""
    if not params.M == params.N >= 1:
        raise DomainError("product sampling needs M = N >= 1")
    if K < 1:
        raise DomainError("K must be positive")
    i = int(np.argmax(params.a)) if i is None else int(i)
    gen = as_generator(rng)
    lam, table, tail_mean = _product_setup(params, int(K), i)
    logs = _compound_draws(gen, lam, table, int(n))
    if tail_correction:
        logs = logs + tail_mean
    elif tail_mean > 1e-3:
        warnings.warn(f"product truncated at K={K} leaves E[-log] bias {tail_mean:.3g}", stacklevel=2)
    return ProductDraws(np.exp(-logs), int(K), i, float(tail_mean), bool(tail_correction))


def sample_beta(params: BarnesBetaParams, rng, n: int, K: int = 200) -> np.ndarray:
    """Draws of ``beta_{M,N}``; compound Poisson for ``M < N``, product for ``M = N``."""
    if params.M < params.N:
        return sample_beta_compound(params, rng, n)
    if params.M == params.N:
        return sample_beta_product(params, rng, n, K=K).values
    raise DomainError("beta_{M,N} is a probability law only for M <= N")


ELEMENTARY = ("lognormal", "frechet", "pareto23", "beta00", "gamma2", "exp")


def sample_elementary(law: str, rng, n: int, **kw) -> np.ndarray:
    """Draws of the elementary laws.

    ``lognormal(sigma2)``: ``exp(N(0, sigma2))``; ``frechet(tau)``:
    ``E^{-1/tau}``; ``pareto23``: density ``2/y^3`` on ``y > 1``;
    ``beta00(b0)``: density ``b0 x^{b0-1}`` on ``(0,1)``; ``gamma2``: density
    ``x e^{-x}``; ``exp(rate)``.
    """
    gen = as_generator(rng)
    n = int(n)
    if law == "lognormal":
        s2 = float(kw.get("sigma2", 1.0))
        if not s2 >= 0:
            raise DomainError("sigma2 must be non-negative")
        return np.exp(math.sqrt(s2) * gen.standard_normal(n))
    if law == "frechet":
        tau = float(kw.get("tau", 1.0))
        if not tau > 0:
            raise DomainError("tau must be positive")
        return gen.standard_exponential(n) ** (-1.0 / tau)
    if law == "pareto23":
        return (1.0 - gen.random(n)) ** -0.5
    if law == "beta00":
        b0 = float(kw.get("b0", 1.0))
        if not b0 > 0:
            raise DomainError("b0 must be positive")
        return (1.0 - gen.random(n)) ** (1.0 / b0)
    if law == "gamma2":
        return gen.standard_exponential(n) + gen.standard_exponential(n)
    if law == "exp":
        rate = float(kw.get("rate", 1.0))
        if not rate > 0:
            raise DomainError("rate must be positive")
        return gen.exponential(1.0 / rate, n)
    raise DomainError(f"unknown law {law!r}; choose from {ELEMENTARY}")


def mc_mellin(sampler: Callable[[int], np.ndarray], q: float, n: int, batch: int = 200_000) -> SampleStats:
    """Mean and standard error of ``X^q`` over ``n`` draws of ``sampler(size)``."""
    acc = MomentAccumulator()
    left = int(n)
    while left > 0:
        m = min(batch, left)
        x = np.asarray(sampler(m), dtype=float)
        acc.update(x**q if q != 0 else np.ones_like(x))
        left -= m
    return acc.stats()


def thread_count() -> int:
    env = os.environ.get("BARNESBETA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def run_streams(task: Callable[[RngStream], MomentAccumulator], base: RngStream, n_streams: int) -> MomentAccumulator:
    """Run ``task`` on ``n_streams`` child streams and merge in stream order."""
    streams = [base.child(k) for k in range(n_streams)]
    threads = min(thread_count(), n_streams)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(task, streams))
    else:
        parts = [task(s) for s in streams]
    total = MomentAccumulator()
    for p in parts:
        total.merge(p)
    return total
