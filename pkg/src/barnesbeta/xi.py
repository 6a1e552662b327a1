"""Riemann zeta and xi, Jacobi theta, and the laws built on them.

``S_2 = (2/pi^2) sum Gamma_{2,n}/n^2`` has ``E[S_2^q] = (2/pi)^q 2 xi(2q)``.
Its exponentially tilted version ``S_2(delta)`` replaces ``pi^2 n^2/2`` by
``pi^2 n^2/2 + delta``, and ``T(delta) = S_2(delta) + Exp(delta)`` is the
limit of the Barnes beta sequence ``beta_M(delta)`` built from the
truncated triple product ``theta_M``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, PoleError
from .identities import IdentityReport
from .mellin import BarnesBetaParams
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, geometric_breakpoints, integrate
from .sampling import SampleStats, as_generator, mc_mellin

HALF_PI2 = math.pi**2 / 2.0

# Borwein's alternating-series weights; error ~ 3 (3 + sqrt 8)^{-n}
_BORWEIN_N = 40


@lru_cache(maxsize=1)
def _borwein_weights():
    n = _BORWEIN_N
    d = np.empty(n + 1)
    acc = 0.0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4.0**i / (math.factorial(n - i) * math.factorial(2 * i))
        d[i] = n * acc
    k = np.arange(n)
    return (-1.0) ** k * (d[:n] - d[n]), d[n]


def _zeta_right(s: complex) -> complex:
    # eta(s) / (1 - 2^{1-s}) for Re(s) > 0
    c, dn = _borwein_weights()
    k = np.arange(1, c.size + 1, dtype=float)
    eta_sum = -np.sum(c * np.exp(-s * np.log(k))) / dn
    return eta_sum / -np.expm1((1.0 - s) * math.log(2.0))


def zeta(s):
    """Riemann zeta.

    ``Re(s) > 0`` uses the accelerated alternating series, the rest the
    reflection formula.  Real input gives a real result.
    """
    sc = complex(s)
    if sc == 1:
        raise PoleError("zeta has a pole at s = 1")
    if sc.real >= 0.5:
        out = _zeta_right(sc)
    elif sc == 0:
        out = -0.5 + 0j
    elif sc.imag == 0 and sc.real < 0 and sc.real % 2 == 0:
        out = 0j
    else:
        r = 1.0 - sc
        out = 2.0**sc * math.pi ** (sc - 1.0) * cmath.sin(math.pi * sc / 2.0) * special.gamma(r) * _zeta_right(r)
    if np.isrealobj(s) or sc.imag == 0:
        return float(out.real)
    return complex(out)


def _log_xi_right(s: complex) -> complex:
    # log xi(s) for Re(s) >= 1/2 away from s = 1; principal branches
    pref = 0.5 * s * (s - 1.0)
    return cmath.log(pref) - 0.5 * s * math.log(math.pi) + special.loggamma(0.5 * s) + cmath.log(_zeta_right(s))


def xi(s):
    """``xi(s) = s(s-1) pi^{-s/2} Gamma(s/2) zeta(s)/2``; entire, ``xi(s) = xi(1-s)``."""
    sc = complex(s)
    if sc.real < 0.5:
        sc = 1.0 - sc
    if abs(sc - 1.0) < 1e-12:
        out = 0.5 + 0j
    else:
        out = cmath.exp(_log_xi_right(sc))
    if np.isrealobj(s) or complex(s).imag == 0:
        return float(out.real)
    return complex(out)


def log_xi(s: float) -> float:
    """``log xi(s)`` for real ``s``; ``xi`` is positive on the real line."""
    s = float(s)
    if s < 0.5:
        s = 1.0 - s
    if abs(s - 1.0) < 1e-12:
        return -math.log(2.0)
    return _log_xi_right(complex(s)).real


# theta


def _theta_series(t: np.ndarray) -> np.ndarray:
    out = np.ones_like(t)
    n = 1
    while True:
        term = np.exp(-math.pi * t * n * n)
        out += 2.0 * term
        if np.all(term < 1e-17):
            return out
        n += 1


def theta(t, M: int | None = None):
    """Jacobi ``theta(t) = 1 + 2 sum exp(-pi t n^2)``; finite ``M`` gives the
    triple-product truncation ``theta_M``.  Vectorised in ``t``.
    """
    ta = np.asarray(t, dtype=float)
    if np.any(~(ta > 0)):
        raise DomainError("theta needs t > 0")
    if M is None:
        small = ta < 1.0
        out = np.empty_like(ta)
        out[~small] = _theta_series(ta[~small])
        # theta(t) = t^{-1/2} theta(1/t)
        out[small] = _theta_series(1.0 / ta[small]) / np.sqrt(ta[small])
    else:
        if M < 1:
            raise DomainError("M must be >= 1")
        out = np.ones_like(ta)
        for n in range(1, int(M) + 1):
            out = out * -np.expm1(-2 * n * math.pi * ta) * (1.0 + np.exp(-(2 * n - 1) * math.pi * ta)) ** 2
    return float(out) if out.ndim == 0 else out


def theta_minus_one(t):
    """``theta(t) - 1`` without cancellation for large ``t``."""
    ta = np.asarray(t, dtype=float)
    out = np.empty_like(ta)
    big = ta >= 1.0
    out[big] = _theta_series(ta[big]) - 1.0
    small = ~big
    out[small] = _theta_series(1.0 / ta[small]) / np.sqrt(ta[small]) - 1.0
    return float(out) if out.ndim == 0 else out


def beta_m_delta(M: int, delta: float) -> BarnesBetaParams:
    """``beta_{2M,3M}`` parameters whose Levy density is ``e^{-delta t} theta_M(pi t/2)/t``."""
    if M < 1:
        raise DomainError("M must be >= 1")
    if not delta > 0:
        raise DomainError("delta must be positive")
    a = tuple((2 * i - 1) * HALF_PI2 for i in range(1, M + 1) for _ in range(2))
    b = tuple((4 * j - 2) * HALF_PI2 for j in range(1, M + 1) for _ in range(2))
    b = b + tuple(2 * j * HALF_PI2 for j in range(1, M + 1))
    return BarnesBetaParams(a, delta, b)


# C_2 and S_2


def _expm1_ratio(u: complex, c: float) -> complex:
    # (e^{c u} - 1)/u, smooth through u = 0
    if abs(u) < 1e-8:
        return c * (1.0 + 0.5 * c * u)
    return (cmath.exp(c * u) - 1.0) / u


def c2_mellin(q):
    """``E[C_2^q] = (2^{2q+2} - 1)/(q+1) (2/pi)^{q+1} xi(2q+2)``; smooth at ``q = -1``."""
    qc = complex(q)
    u = qc + 1.0
    out = _expm1_ratio(2.0 * u, math.log(2.0)) * 2.0 * (2.0 / math.pi) ** u * xi(2.0 * u + 0j)
    if np.isrealobj(q) or qc.imag == 0:
        return float(out.real)
    return complex(out)


def s2_mellin(q):
    """``E[S_2^q] = (2/pi)^q 2 xi(2q)``."""
    qc = complex(q)
    out = (2.0 / math.pi) ** qc * 2.0 * xi(2.0 * qc)
    if np.isrealobj(q) or qc.imag == 0:
        return float(out.real)
    return complex(out)


def _sinhc(x: complex) -> complex:
    return 1.0 + x * x / 6.0 if abs(x) < 1e-6 else cmath.sinh(x) / x


def sinh_factor(delta: float) -> float:
    """``[sinh sqrt(2 delta)/sqrt(2 delta)]^2``."""
    return _sinhc(math.sqrt(2.0 * delta)).real ** 2


S2_KINDS = ("laplace_closed", "laplace_levy", "mellin_series")


def _mellin_series(q: complex, delta: float, max_terms: int = 4000, term_tol: float = 1e-14) -> complex:
    # sinh^2 (2/pi)^q sum_n (-2 delta/pi)^n/n! 2 xi(2q + 2n)
    if not delta < HALF_PI2:
        raise DomainError("the Mellin series needs delta < pi^2/2")
    total = 0j
    log_ratio = math.log(2.0 * delta / math.pi) if delta > 0 else -math.inf
    for n in range(max_terms):
        s = 2.0 * q + 2.0 * n
        if s.real >= 0.5 and abs(s - 1.0) > 1e-12:
            lx = _log_xi_right(s)
        else:
            lx = complex(math.log(abs(xi(s)))) if s.imag == 0 else cmath.log(xi(s))
        if n == 0:
            term = 2.0 * cmath.exp(lx)
        elif delta == 0:
            break
        else:
            term = (-1.0) ** n * 2.0 * cmath.exp(n * log_ratio - math.lgamma(n + 1) + lx)
        total += term
        if n > 2 and abs(term) < term_tol * max(1.0, abs(total)):
            return sinh_factor(delta) * (2.0 / math.pi) ** q * total
    if delta == 0:
        return (2.0 / math.pi) ** q * total
    raise AccuracyError("Mellin series did not converge", best=total, error=abs(term))


def _laplace_levy(q: float, delta: float, cfg: QuadratureConfig) -> float:
    # substitute t = u^2: the t^{-1/2} singularity at 0 becomes bounded
    def f(u):
        t = u * u
        return 2.0 * np.expm1(-q * t) * np.exp(-delta * t) * theta_minus_one(math.pi * t / 2.0) / u

    decay = max(delta, 1e-3) + math.pi**2 / 2.0
    u_hi = math.sqrt(50.0 / decay)
    val, _ = integrate(f, np.r_[0.0, geometric_breakpoints(1e-3, u_hi)], cfg)
    return math.exp(val)


def s2_delta_transform(kind: str, q, delta: float, **knobs):
    """Transforms of ``S_2(delta)``.

    ``laplace_closed`` and ``laplace_levy`` give ``E[exp(-q S_2(delta))]``
    for ``q > 0``; ``mellin_series`` gives ``E[S_2(delta)^q]`` for
    ``delta < pi^2/2``.
    """
    if kind not in S2_KINDS:
        raise DomainError(f"unknown kind {kind!r}; choose from {S2_KINDS}")
    if not delta >= 0:
        raise DomainError("delta must be non-negative")
    if kind == "mellin_series":
        out = _mellin_series(complex(q), float(delta), int(knobs.get("max_terms", 4000)))
        return float(out.real) if np.isrealobj(q) else complex(out)
    q = float(q)
    if not q >= 0:
        raise DomainError("Laplace transforms need q >= 0")
    if kind == "laplace_closed":
        x = math.sqrt(2.0 * (q + delta))
        return sinh_factor(delta) / _sinhc(x).real ** 2
    return _laplace_levy(q, float(delta), knobs.get("cfg", DEFAULT_CONFIG))


def t_laplace(q: float, delta: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``E[exp(-q T(delta))]`` from its Levy integral with the full ``theta`` kernel."""
    q, delta = float(q), float(delta)
    if not (q >= 0 and delta > 0):
        raise DomainError("needs q >= 0 and delta > 0")

    def f(u):
        t = u * u
        return 2.0 * np.expm1(-q * t) * np.exp(-delta * t) * theta(math.pi * t / 2.0) / u

    u_hi = math.sqrt(46.0 / delta)
    val, _ = integrate(f, np.r_[0.0, geometric_breakpoints(1e-3, u_hi)], cfg)
    return math.exp(val)


# T(delta)


@dataclass(frozen=True)
class TDeltaParams:
    """``T(delta)`` with the gamma series cut at ``n_terms``."""

    delta: float
    n_terms: int = 10_000
    tail_mean_correction: bool = True

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError("delta must be positive")
        if self.n_terms < 100:
            raise DomainError("n_terms must be at least 100")

    def weights(self) -> np.ndarray:
        n = np.arange(1, self.n_terms + 1, dtype=float)
        return 1.0 / (HALF_PI2 * n * n + self.delta)

    def tail_mean(self) -> float:
        """``sum_{n > n_terms} 2/(pi^2 n^2/2 + delta)`` in closed form."""
        x = math.sqrt(2.0 * self.delta) / math.pi
        # sum_{n>=1} 1/(n^2 + x^2) = (pi x coth(pi x) - 1)/(2 x^2)
        full = (math.pi * x / math.tanh(math.pi * x) - 1.0) / (2.0 * x * x)
        return 2.0 / HALF_PI2 * full - 2.0 * float(self.weights().sum())


_EXACT_TERMS = 32


def t_delta_sample(p: TDeltaParams, rng, n: int, exact_terms: int = _EXACT_TERMS) -> np.ndarray:
    """Draws of ``sum_{k <= n_terms} Gamma_{2,k}/(pi^2 k^2/2 + delta) + Exp(delta)``.

    The first ``exact_terms`` gammas are drawn individually; the remaining
    block up to ``n_terms`` (a sum of many tiny terms) is drawn as one gamma
    variable with the same mean and variance.  With
    ``tail_mean_correction`` the mean of the terms beyond ``n_terms`` is
    added.
    """
    gen = as_generator(rng)
    n = int(n)
    w = p.weights()
    k0 = min(int(exact_terms), w.size)
    out = gen.exponential(1.0 / p.delta, n)
    for wk in w[:k0]:
        out += wk * gen.standard_gamma(2.0, n)
    rest = w[k0:]
    if rest.size:
        mean = 2.0 * rest.sum()
        var = 2.0 * np.sum(rest * rest)
        out += gen.gamma(mean * mean / var, var / mean, n)
    if p.tail_mean_correction:
        out += p.tail_mean()
    return out


def t_delta_cumulants(p: TDeltaParams, order: int = 3) -> list[float]:
    """Cumulants ``kappa_1..kappa_order`` of the sampled ``T(delta)``."""
    w = p.weights()
    out = []
    for j in range(1, order + 1):
        fact = math.factorial(j - 1)
        k = 2.0 * fact * float(np.sum(w**j)) + fact / p.delta**j
        if j == 1 and p.tail_mean_correction:
            k += p.tail_mean()
        out.append(k)
    return out


def t_delta_moments(p: TDeltaParams, order: int = 3) -> list[float]:
    """Raw moments ``E[T^0..T^order]`` from the cumulants."""
    kappa = t_delta_cumulants(p, order)
    m = [1.0]
    for n in range(1, order + 1):
        m.append(sum(math.comb(n - 1, j - 1) * kappa[j - 1] * m[n - j] for j in range(1, n + 1)))
    return m


def t_delta_rhs(q: float, delta: float) -> float:
    """Right side of the ``T(delta)`` functional equation (equal to ``E[S_2(delta)^q]``)."""
    if not 0 < delta < HALF_PI2:
        raise DomainError("needs 0 < delta < pi^2/2")
    return float(_mellin_series(complex(q), float(delta)).real)


def t_delta_statistic(p: TDeltaParams, q: int, rng, n: int) -> SampleStats:
    """MC mean and stderr of ``T^q - (q/delta) T^{q-1}`` per draw."""
    gen = as_generator(rng)
    c = q / p.delta

    def sampler(m):
        t = t_delta_sample(p, gen, m)
        return t ** (q - 1) * (t - c)

    return mc_mellin(sampler, 1.0, n)


def t_delta_functional_residual(q: int, delta: float, mc: SampleStats | None = None, **knobs) -> IdentityReport:
    """``|E[T^q] - (q/delta) E[T^{q-1}] - rhs|`` in units of the MC stderr.

    ``mc`` holds the statistics of ``T^q - (q/delta) T^{q-1}``; when absent it
    is sampled with knobs ``n``, ``seed``, ``n_terms``.  ``method="exact"``
    uses the cumulant algebra instead and reports the absolute residual.
    """
    if q not in (1, 2, 3):
        raise DomainError("q must be 1, 2 or 3")
    p = TDeltaParams(float(delta), int(knobs.get("n_terms", 10_000)))
    rhs = t_delta_rhs(q, delta)
    echo = {"q": q, "delta": delta, "rhs": rhs, "n_terms": p.n_terms}
    if knobs.get("method") == "exact":
        m = t_delta_moments(p, q)
        lhs = m[q] - q / delta * m[q - 1]
        echo.update(lhs=lhs, units="absolute")
        return IdentityReport("t_delta_funceq", abs(lhs - rhs), 1, echo)
    if mc is None:
        mc = t_delta_statistic(p, q, knobs.get("seed"), int(knobs.get("n", 1_000_000)))
    echo.update(lhs=mc.mean, stderr=mc.stderr, n=mc.n, units="stderr")
    return IdentityReport("t_delta_funceq", abs(mc.mean - rhs) / mc.stderr, 1, echo)


def delta_limit_extrapolation(values, stderrs, deltas):
    """Weighted straight-line fit ``v(delta) = c0 + c1 delta``; returns ``(c0, stderr(c0))``."""
    d = np.asarray(deltas, float)
    v = np.asarray(values, float)
    w = 1.0 / np.asarray(stderrs, float) ** 2
    A = np.vstack([np.ones_like(d), d]).T
    cov = np.linalg.inv(A.T @ (A * w[:, None]))
    coef = cov @ (A.T @ (w * v))
    return float(coef[0]), float(math.sqrt(cov[0, 0]))


__all__ = [
    "zeta",
    "xi",
    "log_xi",
    "theta",
    "theta_minus_one",
    "beta_m_delta",
    "c2_mellin",
    "s2_mellin",
    "sinh_factor",
    "s2_delta_transform",
    "t_laplace",
    "TDeltaParams",
    "t_delta_sample",
    "t_delta_cumulants",
    "t_delta_moments",
    "t_delta_rhs",
    "t_delta_statistic",
    "t_delta_functional_residual",
    "delta_limit_extrapolation",
]
