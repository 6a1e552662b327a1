"""Selberg integral distribution, its two-period parent, and the critical law.

For periods ``a = (a1, a2)`` and ``x = (x1, x2)`` the four-ratio ``Gamma_2``
expression ``master_mellin`` is the Mellin transform of

    M_(a,x) = 2^{-(2(x1+x2) - (a1+a2))/(a1 a2)} L X1 X2 X3,

with ``L`` lognormal and ``X_i`` inverse ``beta_{2,2}`` factors.  Taking
``a = (1, tau)`` and ``x_i = 1 + tau(1 + lambda_i)`` and adding a Frechet
factor ``Y`` gives the law whose positive integer moments are Selberg's
integral.  ``tau -> 1`` gives the critical law ``M_c`` in terms of Barnes G.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, TruncationError
from .extrapolate import richardson_doubling
from .identities import IdentityReport
from .mellin import BarnesBetaParams, eta, levy_cumulant, log_eta
from .multigamma import barnes_g, log_gamma, log_multigamma
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, geometric_breakpoints, integrate
from .sampling import as_generator, sample_beta_product, sample_elementary
from .xi import c2_mellin

LOG2 = math.log(2.0)


def _real_if(q, value):
    if np.isrealobj(q) or complex(q).imag == 0:
        return float(complex(value).real)
    return complex(value)


def _L2(a, w, cfg: QuadratureConfig):
    if cfg is DEFAULT_CONFIG:
        return log_multigamma(a, w)
    return log_gamma(a, w, cfg).value


def _log_ratio(a, num, den, cfg):
    return _L2(a, num, cfg) - _L2(a, den, cfg)


def _log_gamma_c(z):
    return complex(special.loggamma(complex(z)))


# Master theorem


@dataclass(frozen=True)
class MasterParams:
    a1: float
    a2: float
    x1: float
    x2: float

    def __post_init__(self):
        for name in ("a1", "a2", "x1", "x2"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be finite and positive")
            object.__setattr__(self, name, v)

    @property
    def a(self) -> tuple:
        return (self.a1, self.a2)

    @property
    def lognormal_variance(self) -> float:
        return 4.0 * LOG2 / (self.a1 * self.a2)

    @property
    def scale_exponent(self) -> float:
        """``e`` in the prefactor ``2^{-e}``."""
        return (2.0 * (self.x1 + self.x2) - (self.a1 + self.a2)) / (self.a1 * self.a2)

    def factors(self) -> list[BarnesBetaParams | None]:
        """``beta_{2,2}`` parameters of ``X1, X2, X3`` (``None`` when degenerate at 1)."""
        a = self.a
        lo, hi = sorted((self.x1, self.x2))
        s = self.x1 + self.x2
        if s < self.a1 + self.a2:
            raise DomainError("the factorization needs x1 + x2 >= a1 + a2")
        d1 = (hi - lo) / 2.0
        d3 = (s - self.a1 - self.a2) / 2.0
        return [
            BarnesBetaParams(a, lo, (d1, d1)) if d1 > 0 else None,
            BarnesBetaParams(a, s / 2.0, (self.a1 / 2.0, self.a2 / 2.0)),
            BarnesBetaParams(a, self.a1 + self.a2, (d3, d3)) if d3 > 0 else None,
        ]


def _log_master(p: MasterParams, q: complex, cfg) -> complex:
    a = p.a
    args = (p.x1 - q, p.x2 - q, p.a1 + p.a2 - q, p.x1 + p.x2 - 2.0 * q)
    if any(not w.real > 0 for w in args):
        raise DomainError(f"q={q} puts a Gamma_2 argument outside Re > 0")
    out = _log_ratio(a, p.x1 - q, p.x1, cfg)
    out += _log_ratio(a, p.x2 - q, p.x2, cfg)
    out += _log_ratio(a, p.a1 + p.a2 - q, p.a1 + p.a2, cfg)
    out += _log_ratio(a, p.x1 + p.x2 - q, p.x1 + p.x2 - 2.0 * q, cfg)
    return out


def master_mellin(p: MasterParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``E[M_(a,x)^q]``: the four ``Gamma_2`` ratios."""
    q_c = complex(q)
    if q_c == 0:
        return _real_if(q, 1.0)
    return _real_if(q, cmath.exp(_log_master(p, q_c, cfg)))


def master_factor_mellin(p: MasterParams, q):
    """``2^{-e q} E[L^q] E[X1^q] E[X2^q] E[X3^q]`` from the component laws."""
    q_c = complex(q)
    log_v = -p.scale_exponent * q_c * LOG2 + 0.5 * p.lognormal_variance * q_c * q_c
    for f in p.factors():
        if f is not None:
            log_v += log_eta(f, -q_c)[0]
    return _real_if(q, cmath.exp(log_v))


def _inverse_beta22(f: BarnesBetaParams | None, gen, n: int, K: int) -> np.ndarray:
    if f is None:
        return np.ones(n)
    return 1.0 / sample_beta_product(f, gen, n, K=K).values


def master_sample(p: MasterParams, rng, n: int, K: int = 200) -> np.ndarray:
    """Draws of ``2^{-e} L X1 X2 X3``."""
    gen = as_generator(rng)
    n = int(n)
    out = 2.0 ** -p.scale_exponent * sample_elementary("lognormal", gen, n, sigma2=p.lognormal_variance)
    for f in p.factors():
        out *= _inverse_beta22(f, gen, n, K)
    return out


# Selberg


@dataclass(frozen=True)
class SelbergParams:
    tau: float
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        tau = float(self.tau)
        if not (tau > 0 and math.isfinite(tau)):
            raise DomainError("tau must be positive")
        for name in ("lambda1", "lambda2"):
            v = float(getattr(self, name))
            if not v > -1.0 / tau:
                raise DomainError(f"{name} must exceed -1/tau")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "tau", tau)

    @property
    def x(self) -> tuple:
        return (1.0 + self.tau * (1.0 + self.lambda1), 1.0 + self.tau * (1.0 + self.lambda2))

    def master(self) -> MasterParams:
        x1, x2 = self.x
        return MasterParams(1.0, self.tau, x1, x2)

    def involuted(self) -> "SelbergParams":
        """``(1/tau, tau lambda1, tau lambda2)``."""
        return SelbergParams(1.0 / self.tau, self.tau * self.lambda1, self.tau * self.lambda2)

    def require_distribution(self):
        if not self.tau > 1:
            raise DomainError("the Selberg law needs tau > 1")


def _log_reduced(p: SelbergParams, q: complex, cfg) -> complex:
    # log of tau^{q/tau} times the Gamma_2 ratios; defined for every tau > 0
    tau = p.tau
    a = (1.0, tau)
    x1, x2 = p.x
    s = x1 + x2
    args = (x1 - q, x2 - q, tau - q, s - 2.0 * q)
    if any(not w.real > 0 for w in args):
        raise DomainError(f"q={q} puts a Gamma_2 argument outside Re > 0")
    out = q / tau * math.log(tau)
    out += _log_ratio(a, x1 - q, x1, cfg)
    out += _log_ratio(a, x2 - q, x2, cfg)
    out += _log_ratio(a, tau - q, tau, cfg)
    out += _log_ratio(a, s - q, s - 2.0 * q, cfg)
    return out


def _log_norm(tau: float) -> float:
    # log(2 pi / Gamma(1 - 1/tau))
    return math.log(2.0 * math.pi) - math.lgamma(1.0 - 1.0 / tau)


def selberg_mellin(p: SelbergParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``E[M^q] = tau^{q/tau} (2 pi)^q Gamma(1-1/tau)^{-q}`` times the ``Gamma_2`` ratios."""
    p.require_distribution()
    q_c = complex(q)
    if not q_c.real < p.tau:
        raise DomainError("selberg_mellin needs Re(q) < tau")
    if q_c == 0:
        return _real_if(q, 1.0)
    return _real_if(q, cmath.exp(q_c * _log_norm(p.tau) + _log_reduced(p, q_c, cfg)))


def reduced_mellin(p: SelbergParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``E[(M*)^q]`` with ``M* = Gamma(1-1/tau) M/(2 pi)``, for any ``tau > 0``."""
    q_c = complex(q)
    if q_c == 0:
        return _real_if(q, 1.0)
    return _real_if(q, cmath.exp(_log_reduced(p, q_c, cfg)))


def selberg_moment(p: SelbergParams, l: int, sign: int = 1) -> float:
    """Integer moments ``E[M^{sign l}]`` from the finite gamma products."""
    p.require_distribution()
    l = int(l)
    if l < 1:
        raise DomainError("l must be a positive integer")
    tau, l1, l2 = p.tau, p.lambda1, p.lambda2
    lg = math.lgamma
    total = 0.0
    if sign > 0:
        if not l < tau:
            raise DomainError("positive moments need l < tau")
        for k in range(l):
            total += lg(1 - (k + 1) / tau) - lg(1 - 1 / tau)
            total += lg(1 + l1 - k / tau) + lg(1 + l2 - k / tau) - lg(2 + l1 + l2 - (l + k - 1) / tau)
    else:
        for k in range(l):
            total += lg(2 + l1 + l2 + (l + 2 + k) / tau) + lg(1 - 1 / tau)
            total -= lg(1 + l1 + (k + 1) / tau) + lg(1 + l2 + (k + 1) / tau) + lg(1 + k / tau)
    return math.exp(total)


def selberg_sample(p: SelbergParams, rng, n: int, K: int = 200) -> np.ndarray:
    """Draws of ``2 pi 2^{-[3(1+tau) + 2 tau(l1+l2)]/tau} L X1 X2 X3 Y / Gamma(1-1/tau)``."""
    p.require_distribution()
    gen = as_generator(rng)
    n = int(n)
    tau = p.tau
    const = 2.0 * math.pi * 2.0 ** (-(3.0 * (1.0 + tau) + 2.0 * tau * (p.lambda1 + p.lambda2)) / tau)
    const /= math.gamma(1.0 - 1.0 / tau)
    m = p.master()
    out = const * sample_elementary("lognormal", gen, n, sigma2=m.lognormal_variance)
    for f in m.factors():
        out *= _inverse_beta22(f, gen, n, K)
    return out * sample_elementary("frechet", gen, n, tau=tau)


def _log_partial_products(term, k_max: int) -> np.ndarray:
    m = np.arange(1, k_max + 1, dtype=float)
    return np.concatenate([[0.0], np.cumsum(term(m))])


def _extrapolated_log_product(term, k_start: int, max_doublings: int, tol: float, what: str):
    # gammaln differences near m log m lose ~1e-12 per term, so tol below ~1e-9 is not reachable
    sums = _log_partial_products(term, k_start * 2**max_doublings)
    return richardson_doubling(lambda K: sums[K], k_start, 1.0, tol, max_doublings, what)


def selberg_infinite_product(p: SelbergParams, q: float, k_start: int = 125, max_doublings: int = 4):
    """The infinite product form of ``E[M^q]`` (real ``q``), Richardson-extrapolated.

    Returns ``(value, error_estimate)``.
    """
    p.require_distribution()
    tau, l1, l2 = p.tau, p.lambda1, p.lambda2
    lg = special.gammaln
    q = float(q)
    c = tau * (l1 + l2)

    def term(m):
        mt = m * tau
        return (
            2 * q * np.log(mt)
            + lg(1 - q + mt) - lg(1 + mt)
            + lg(1 - q + tau * l1 + mt) - lg(1 + tau * l1 + mt)
            + lg(1 - q + tau * l2 + mt) - lg(1 + tau * l2 + mt)
            + lg(2 - q + c + mt) - lg(2 - 2 * q + c + mt)
        )

    res = _extrapolated_log_product(term, k_start, max_doublings, 1e-8, "Selberg product")
    head = (
        q * math.log(tau)
        + math.lgamma(1 - q / tau)
        + math.lgamma(2 - 2 * q + tau * (1 + l1 + l2))
        - q * math.lgamma(1 - 1 / tau)
        - math.lgamma(2 - q + tau * (1 + l1 + l2))
    )
    value = math.exp(head + res.value.real)
    return value, value * res.error


def funceq_tau_factor(p: SelbergParams, q) -> complex:
    """``E[M^q]/E[M^{q-tau}]`` from the period-``tau`` functional equation."""
    tau, l1, l2 = p.tau, p.lambda1, p.lambda2
    q = complex(q)
    G = _log_gamma_c
    v = math.log(tau) + (tau - 1) * math.log(2 * math.pi) - tau * math.lgamma(1 - 1 / tau)
    v += G(tau - q) + G((1 + l1) * tau - (q - 1)) + G((1 + l2) * tau - (q - 1))
    v -= G((2 + l1 + l2) * tau - (2 * q - 2))
    v += G((2 + l1 + l2) * tau - (q - 2)) - G((3 + l1 + l2) * tau - (2 * q - 2))
    return cmath.exp(v)


def funceq_one_factor(p: SelbergParams, q) -> complex:
    """``E[M^q]/E[M^{q-1}]`` from the period-one functional equation."""
    tau, l1, l2 = p.tau, p.lambda1, p.lambda2
    q = complex(q)
    G = _log_gamma_c
    v = G(1 - q / tau) + G(2 + l1 + l2 - (q - 2) / tau) - math.lgamma(1 - 1 / tau)
    v += G(1 + l1 - (q - 1) / tau) + G(1 + l2 - (q - 1) / tau)
    v -= G(2 + l1 + l2 - (2 * q - 2) / tau) + G(2 + l1 + l2 - (2 * q - 3) / tau)
    return cmath.exp(v)


SELBERG_KINDS = ("infinite_product", "funceq_tau", "funceq_one", "involution")
DEFAULT_SELBERG_GRID = (-1.0, -0.5, 0.3, 0.6)


def _rel_err(lhs, rhs) -> float:
    return abs(complex(lhs) / complex(rhs) - 1.0)


def selberg_identity_residual(kind: str, p: SelbergParams, **knobs) -> IdentityReport:
    """Max relative residual of a Selberg-law identity over a ``q`` grid.

    Knobs: ``q_grid``, ``cfg``; ``k_start``/``max_doublings`` for the
    infinite product.  ``involution`` checks ``X_i`` and the lognormal at the
    Mellin level and the reduced-transform relation; it accepts ``tau <= 1``.
    """
    if kind not in SELBERG_KINDS:
        raise DomainError(f"unknown kind {kind!r}; choose from {SELBERG_KINDS}")
    grid = tuple(knobs.get("q_grid", DEFAULT_SELBERG_GRID))
    cfg = knobs.get("cfg", DEFAULT_CONFIG)
    echo = {"tau": p.tau, "lambda": (p.lambda1, p.lambda2), "q_grid": [str(q) for q in grid]}
    worst = 0.0
    count = 0
    if kind == "infinite_product":
        k_start = int(knobs.get("k_start", 125))
        max_doublings = int(knobs.get("max_doublings", 4))
        echo["K"] = k_start * 2**max_doublings
        for q in grid:
            value, _ = selberg_infinite_product(p, float(q), k_start, max_doublings)
            worst = max(worst, _rel_err(value, selberg_mellin(p, q, cfg)))
            count += 1
    elif kind == "funceq_tau":
        for q in grid:
            rhs = selberg_mellin(p, complex(q) - p.tau, cfg) * funceq_tau_factor(p, q)
            worst = max(worst, _rel_err(selberg_mellin(p, q, cfg), rhs))
            count += 1
    elif kind == "funceq_one":
        for q in grid:
            rhs = selberg_mellin(p, complex(q) - 1.0, cfg) * funceq_one_factor(p, q)
            worst = max(worst, _rel_err(selberg_mellin(p, q, cfg), rhs))
            count += 1
    else:
        inv = p.involuted()
        tau = p.tau
        m, m_inv = p.master(), inv.master()
        f, f_inv = m.factors(), m_inv.factors()
        for q in grid:
            q = complex(q)
            # lognormal: variance scales by tau^2 when q -> q/tau
            lhs_l = 0.5 * m_inv.lognormal_variance * (q / tau) ** 2
            rhs_l = 0.5 * m.lognormal_variance * q * q
            worst = max(worst, abs(cmath.exp(lhs_l - rhs_l) - 1.0))
            for g, g_inv in zip(f, f_inv):
                if (g is None) != (g_inv is None):
                    raise DomainError("factor degeneracy differs under the involution")
                if g is None:
                    continue
                worst = max(worst, _rel_err(eta(g_inv, -q / tau).value, eta(g, -q).value))
            rhs = cmath.exp(_log_gamma_c(1 - q) - _log_gamma_c(1 - q / tau)) * reduced_mellin(p, q, cfg)
            worst = max(worst, _rel_err(reduced_mellin(inv, q / tau, cfg), rhs))
            count += 1
    return IdentityReport(kind, float(worst), count, echo)


# Critical law


def critical_mellin(q, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``E[M_c^q] = G(4-2q) / (G(1-q) G(2-q)^2 G(4-q))`` for ``Re(q) < 1``."""
    q_c = complex(q)
    if not q_c.real < 1:
        raise DomainError("critical_mellin needs Re(q) < 1")
    if q_c == 0:
        return _real_if(q, 1.0)
    num = barnes_g(4 - 2 * q_c, cfg)
    den = barnes_g(1 - q_c, cfg) * barnes_g(2 - q_c, cfg) ** 2 * barnes_g(4 - q_c, cfg)
    return _real_if(q, num / den)


def critical_moment(l: int) -> float:
    """``E[M_c^{-l}] = prod_{k<l} (3+l+k)! / ((k+1)!^2 k!)``."""
    l = int(l)
    if l < 1:
        raise DomainError("l must be a positive integer")
    num = math.prod(math.factorial(3 + l + k) for k in range(l))
    den = math.prod(math.factorial(k + 1) ** 2 * math.factorial(k) for k in range(l))
    return num / den


def critical_funceq_factor(q) -> complex:
    """``E[M_c^q]/E[M_c^{q-1}]``."""
    q = complex(q)
    G = _log_gamma_c
    return cmath.exp(G(1 - q) + 2 * G(2 - q) + G(4 - q) - G(4 - 2 * q) - G(5 - 2 * q))


def critical_infinite_product(q: float, k_start: int = 125, max_doublings: int = 4):
    """Infinite product form of ``E[M_c^q]`` (real ``q``); ``(value, error)``."""
    q = float(q)
    lg = special.gammaln

    def term(m):
        return 2 * q * np.log(m) + 3 * (lg(1 - q + m) - lg(1 + m)) + lg(2 - q + m) - lg(2 - 2 * q + m)

    res = _extrapolated_log_product(term, k_start, max_doublings, 1e-8, "critical product")
    head = math.lgamma(1 - q) + math.lgamma(3 - 2 * q) - math.lgamma(3 - q)
    value = math.exp(head + res.value.real)
    return value, value * res.error


X2_CRITICAL = BarnesBetaParams((1.0, 1.0), 2.0, (0.5, 0.5))


def critical_factor_mellin(q):
    """``E[M_c^q]`` assembled from ``(pi/32) L X2 X3 Y`` factor by factor."""
    q_c = complex(q)
    log_v = q_c * math.log(math.pi / 32.0) + 2.0 * LOG2 * q_c * q_c
    log_v += log_eta(X2_CRITICAL, -q_c)[0]
    log_v += math.log(2.0) - cmath.log(2.0 - q_c) + _log_gamma_c(1 - q_c)
    return _real_if(q, cmath.exp(log_v))


def critical_sample(rng, n: int, K: int = 200) -> np.ndarray:
    """Draws of ``(pi/32) L X2 X3 Y``: lognormal, inverse ``beta_{2,2}``, Pareto and Frechet."""
    gen = as_generator(rng)
    n = int(n)
    out = (math.pi / 32.0) * sample_elementary("lognormal", gen, n, sigma2=4.0 * LOG2)
    out *= 1.0 / sample_beta_product(X2_CRITICAL, gen, n, K=K).values
    out *= sample_elementary("pareto23", gen, n)
    return out * sample_elementary("frechet", gen, n, tau=1.0)


CRITICAL_KINDS = ("funceq", "infinite_product", "negative_moments", "factorization")
DEFAULT_CRITICAL_GRID = (-1.5, -0.5, 0.25, 0.6)


def critical_identity_residual(kind: str, **knobs) -> IdentityReport:
    """Max relative residual of a critical-law identity over a ``q`` grid."""
    if kind not in CRITICAL_KINDS:
        raise DomainError(f"unknown kind {kind!r}; choose from {CRITICAL_KINDS}")
    grid = tuple(knobs.get("q_grid", DEFAULT_CRITICAL_GRID))
    worst = 0.0
    count = 0
    if kind == "negative_moments":
        grid = tuple(knobs.get("l_grid", (1, 2, 3)))
        for l in grid:
            worst = max(worst, _rel_err(critical_mellin(-float(l)), critical_moment(l)))
            count += 1
    else:
        for q in grid:
            if kind == "funceq":
                rhs = critical_funceq_factor(q) * critical_mellin(complex(q) - 1.0)
            elif kind == "infinite_product":
                rhs = critical_infinite_product(float(q))[0]
            else:
                rhs = critical_factor_mellin(q)
            worst = max(worst, _rel_err(critical_mellin(q), rhs))
            count += 1
    return IdentityReport(kind, float(worst), count, {"q_grid": [str(q) for q in grid]})


# beta_{2,2}(delta) and C_2


def beta22_delta_params(delta: float) -> BarnesBetaParams:
    if not delta > 0:
        raise DomainError("delta must be positive")
    return BarnesBetaParams((1.0, 1.0), delta, (0.5, 0.5))


BETA22_METHODS = ("barnes_g", "eta", "sech2")


def beta22_delta_mellin(q, delta: float, method: str = "eta", cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``E[beta_{2,2}(delta)^q]`` by one of three routes.

    ``barnes_g``: ratio of Barnes G values; ``eta``: the generic Mellin
    transform; ``sech2``: the Levy integral with the ``cosh^{-2}(t/4)``
    kernel (real ``q > -delta``).
    """
    if method not in BETA22_METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {BETA22_METHODS}")
    params = beta22_delta_params(delta)
    if method == "eta":
        return _real_if(q, eta(params, q, cfg).value)
    if method == "barnes_g":
        G = lambda z: barnes_g(z, cfg)  # noqa: E731
        qc = complex(q)
        d = float(delta)
        v = G(d) / G(qc + d) * (G(qc + d + 0.5) / G(d + 0.5)) ** 2 * G(d + 1) / G(qc + d + 1)
        return _real_if(q, v)
    q = float(q)
    if not q > -delta:
        raise DomainError("the sech^2 integral needs q > -delta")

    def f(t):
        # (1/4) sech^2(t/4) e^{-(delta - 1/2) t} = e^{-delta t}/(1 + e^{-t/2})^2
        return np.expm1(-q * t) * np.exp(-delta * t) / (1.0 + np.exp(-0.5 * t)) ** 2 / t

    decay = delta + min(q, 0.0)
    breaks = np.r_[0.0, geometric_breakpoints(1e-6, 46.0 / decay)]
    val, _ = integrate(f, breaks, cfg)
    return math.exp(val)


def beta22_delta_cumulant(n: int, delta: float, m_max: int = 400, tol: float = 1e-15) -> float:
    """``kappa_n`` of ``-log beta_{2,2}(delta)`` from the ``C_2`` series (``0 < delta < 1``).

    Terms are ``(-(delta-1/2))^m/m! 32^{(m+n)/2} Gamma((m+n)/2) E[C_2^{-(m+n)/2}]/8``;
    summation stops once two consecutive terms fall below ``tol`` relative.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0 < delta < 1:
        raise DomainError("the cumulant series converges only for 0 < delta < 1")
    x = -(delta - 0.5)
    total = 0.0
    small = 0
    for m in range(m_max + 1):
        if m > 0 and x == 0:
            break
        s = (m + n) / 2.0
        log_mag = s * math.log(32.0) + math.lgamma(s) - math.lgamma(m + 1)
        if m:
            log_mag += m * math.log(abs(x))
        term = math.copysign(1.0, x) ** m * math.exp(log_mag) * c2_mellin(-s) / 8.0
        total += term
        small = small + 1 if abs(term) < tol * max(1.0, abs(total)) else 0
        if small >= 2:
            return total
    if x == 0:
        return total
    raise TruncationError("cumulant series did not converge", best=total, error=abs(term))


def numerical_cumulant(params: BarnesBetaParams, n: int, h: float = 1e-2) -> float:
    """``(-1)^n d^n/dq^n log E[beta^q]`` at 0 by central differences and Richardson extrapolation."""
    if n not in (1, 2, 3, 4):
        raise DomainError("n must be 1..4")

    def f(q):
        return log_eta(params, q)[0].real

    stencils = {
        1: ((-1, -0.5), (1, 0.5)),
        2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
        3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
        4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
    }

    def d(step):
        return sum(c * f(k * step) for k, c in stencils[n]) / step**n

    # steps h, h/2, h/4; the stencils have even error expansions in the step
    row = [d(h / 2.0**j) for j in range(3)]
    for level in (1, 2):
        f4 = 4.0**level
        row = [(f4 * row[j + 1] - row[j]) / (f4 - 1.0) for j in range(len(row) - 1)]
    return (-1) ** n * row[0]


def levy_route_cumulant(delta: float, n: int) -> float:
    """``int t^n rho(t) dt`` for ``beta_{2,2}(delta)``: a third route to ``kappa_n``."""
    return levy_cumulant(beta22_delta_params(delta), n)


__all__ = [
    "MasterParams",
    "SelbergParams",
    "master_mellin",
    "master_factor_mellin",
    "master_sample",
    "selberg_mellin",
    "reduced_mellin",
    "selberg_moment",
    "selberg_sample",
    "selberg_infinite_product",
    "selberg_identity_residual",
    "critical_mellin",
    "critical_moment",
    "critical_infinite_product",
    "critical_factor_mellin",
    "critical_sample",
    "critical_identity_residual",
    "beta22_delta_params",
    "beta22_delta_mellin",
    "beta22_delta_cumulant",
    "numerical_cumulant",
    "levy_route_cumulant",
]
