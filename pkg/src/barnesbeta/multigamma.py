"""Barnes multiple log-gamma ``L_M(w|a)`` and friends.

``L_M`` is evaluated from the Malmsten-type integral

    L_M(w|a) = int_0^inf dt/t^{M+1} ( e^{-wt} f(t) - sum_{k<M} t^k B_k(w)/k!
                                      - t^M e^{-t} B_M(w)/M! ),

with ``f(t) = t^M / prod(1 - e^{-a_j t})``.  The range is split at a small
``t0``.  On ``[0, t0]`` the bracket is replaced by its Taylor series (whose
first ``M+1`` coefficients vanish) and integrated term by term.  On
``[t0, inf)`` the subtraction terms are integrated in closed form, the
remaining ``e^{-wt}/(t prod(1-e^{-a_j t}))`` is integrated by adaptive
Gauss-Legendre up to ``T`` and beyond ``T`` by expanding the product into
exponentials, each giving an ``E_1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, PoleError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, geometric_breakpoints, integrate
from .series import GammaParams, PowerSeries, bernoulli_coeffs, series_exp

LOG_2PI = math.log(2.0 * math.pi)

# extra Taylor terms beyond the vanishing head of the bracket
_SERIES_EXTRA = 40


@dataclass(frozen=True)
class LogGammaValue:
    value: complex
    est_error: float

    def __post_init__(self):
        if self.est_error < 0:
            raise ValueError("error estimate must be non-negative")


def _as_params(params) -> GammaParams:
    return params if isinstance(params, GammaParams) else GammaParams(tuple(params))


def _split_point(a: Sequence[float], w: complex, extra: float = 0.0) -> float:
    # series radius is 2*pi/max(a); exp(-wt) coefficients need |w| t0 small
    amax = max(max(a), extra) if a else extra
    t0 = math.pi / (2.0 * amax) if amax > 0 else 1.0
    if abs(w) > 0:
        t0 = min(t0, 5.0 / abs(w))
    return t0


def _head_integral(bracket: PowerSeries, p: int, t0: float):
    """``int_0^t0 bracket(t)/t^p dt`` for a bracket vanishing to order ``p``.

    Returns ``(value, truncation_estimate, head_residue)`` where the residue
    is the size of the coefficients that should be zero.
    """
    c = bracket.coeffs
    residue = float(np.max(np.abs(c[:p]))) if p > 0 else 0.0
    j = np.arange(p, c.size)
    terms = c[p:] * t0 ** (j - p + 1) / (j - p + 1)
    return terms.sum(), float(abs(terms[-1]) + abs(terms[-2])), residue


def _check(value, err, cfg: QuadratureConfig, what: str):
    if not np.isfinite(value) or err > max(cfg.abs_tol, cfg.rel_tol * abs(value)):
        raise AccuracyError(f"{what}: error estimate {err:.3g} above tolerance", best=value, error=err)


def _lattice_exponents(a: Sequence[float], limit: float, cap: int):
    """Values ``k.a`` (with multiplicity) not exceeding ``limit``, at most ``cap`` of them."""
    out = [0.0]
    for a_j in a:
        nxt = []
        for base in out:
            k = 0
            while base + k * a_j <= limit:
                nxt.append(base + k * a_j)
                k += 1
        out = sorted(nxt)[:cap]
    return np.asarray(out)


def log_gamma_quad(a: Sequence[float], w: complex, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Raw Malmsten quadrature; returns ``(value, error_estimate)``."""
    a = tuple(float(x) for x in a)
    M = len(a)
    w = complex(w)
    if not w.real > 0:
        raise DomainError(f"log_gamma needs Re(w) > 0, got {w}")
    if M == 0:
        return -np.log(w), 0.0

    t0 = _split_point(a, w)
    order = M + 1 + _SERIES_EXTRA
    full = bernoulli_coeffs(a, w, order)
    c = full.coeffs
    sub = np.zeros(order + 1, dtype=complex)
    sub[:M] = c[:M]
    sub[M:] += c[M] * series_exp(-1.0, order - M).coeffs
    head, trunc, residue = _head_integral(full - PowerSeries(sub), M + 1, t0)

    T = cfg.split_point if cfg.split_point is not None else 40.0 / min(w.real, 1.0)
    T = max(T, 4.0 * t0)
    av = np.asarray(a)

    def body(t):
        return np.exp(-w * t) / (t * np.prod(-np.expm1(-np.outer(t, av)), axis=1))

    max_width = math.pi / abs(w.imag) if w.imag else None
    num, qerr = integrate(body, geometric_breakpoints(t0, T, max_width=max_width), cfg)

    shifts = _lattice_exponents(a, 30.0 / T, cfg.tail_index_cutoff)
    tail = special.exp1((w + shifts) * T).sum()

    k = np.arange(M)
    poly = np.sum(c[:M] * t0 ** (k - M) / (M - k))
    value = head + num + tail - poly - c[M] * special.exp1(t0)
    # rounding in the cancelling head is part of the error budget
    err = qerr + trunc + 1e-15 * abs(poly)
    if residue > 1e-9 * max(1.0, float(np.max(np.abs(c[: M + 1])))):
        raise AccuracyError("series head did not cancel", best=value, error=residue)
    return value, err


def log_gamma(params, w, cfg: QuadratureConfig = DEFAULT_CONFIG) -> LogGammaValue:
    """``L_M(w|a)`` by quadrature, with an error estimate.

    ``M = 0`` gives ``-log w`` exactly.  Raises :class:`DomainError` for
    ``Re(w) <= 0`` and :class:`AccuracyError` if the tolerance is missed.
    """
    params = _as_params(params)
    value, err = log_gamma_quad(params.a, w, cfg)
    _check(value, err, cfg, "log_gamma")
    return LogGammaValue(complex(value), float(err))


def log_gamma1_closed(a: float, w):
    """``log Gamma_1(w|a) = (w/a - 1/2) log a - log(2 pi)/2 + log Gamma(w/a)``."""
    z = w / a
    zc = complex(z)
    if zc.imag == 0 and zc.real <= 0 and zc.real == math.floor(zc.real):
        raise PoleError(f"Gamma_1 has a pole at w={w}")
    return (z - 0.5) * math.log(a) - 0.5 * LOG_2PI + special.loggamma(z)


def gamma1_closed(a: float, w):
    """``Gamma_1(w|a) = a^{w/a - 1/2} Gamma(w/a) / sqrt(2 pi)``."""
    return np.exp(log_gamma1_closed(a, w))


@lru_cache(maxsize=200_000)
def _cached_quad(a: tuple, wr: float, wi: float):
    value, err = log_gamma_quad(a, complex(wr, wi))
    return complex(value), float(err)


def log_multigamma_err(a: Sequence[float], w):
    """``(L_M(w|a), error_estimate)`` for the higher layers.

    ``M <= 1`` uses closed forms; ``M >= 2`` uses the memoised quadrature
    (cache keyed on ``w`` rounded to 14 decimals).  Arguments with
    ``Re(w) < 0.25`` are first moved right with the functional equation
    ``L_M(w) = L_{M-1}(w|a^) + L_M(w + a_i)``.
    """
    a = tuple(float(x) for x in a)
    w = complex(w)
    M = len(a)
    if M == 0:
        if w == 0:
            raise PoleError("Gamma_0 has a pole at 0")
        v = complex(-np.log(w))
        return v, 1e-16 * abs(v)
    if M == 1:
        v = complex(log_gamma1_closed(a[0], w))
        return v, 1e-15 * max(1.0, abs(v))
    if w.real < 0.25:
        i = int(np.argmax(a))
        rest = a[:i] + a[i + 1:]
        v1, e1 = log_multigamma_err(rest, w)
        v2, e2 = log_multigamma_err(a, w + a[i])
        return v1 + v2, e1 + e2
    return _cached_quad(a, round(w.real, 14), round(w.imag, 14))


def log_multigamma(a: Sequence[float], w) -> complex:
    """``L_M(w|a)`` through the fast path of :func:`log_multigamma_err`."""
    return log_multigamma_err(a, w)[0]


def log_barnes_g(z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``log G(z)`` for ``Re(z) > 0`` via ``Gamma_2(.|1,1)``."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError("log_barnes_g needs Re(z) > 0")
    l_z = log_gamma((1.0, 1.0), z, cfg).value
    l_1 = log_gamma((1.0, 1.0), 1.0, cfg).value
    return 0.5 * (z - 1.0) * LOG_2PI - l_z + l_1


def barnes_g(z, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Barnes ``G(z)``; ``G(1) = 1`` and ``G(z+1) = Gamma(z) G(z)``.

    For ``Re(z) <= 0`` the recursion is run upward, so zeros at the
    non-positive integers come out exactly.
    """
    zc = complex(z)
    factor = 1.0 + 0j
    while zc.real <= 0:
        if zc.imag == 0 and zc.real == math.floor(zc.real):
            return 0.0
        factor /= special.gamma(zc)
        zc += 1.0
    out = factor * np.exp(log_barnes_g(zc, cfg))
    if np.isrealobj(z) or complex(z).imag == 0:
        return float(out.real)
    return complex(out)


def _tail_bound(a: Sequence[float], sigma: float, c: float, n_max: int) -> float:
    """Upper bound of ``sum |(w + k.a)^{-s}|`` over ``k`` outside ``[0, n_max]^M``."""
    M = len(a)
    total = 0.0
    for i in range(M):
        others = a[:i] + a[i + 1:]
        base = c + n_max * a[i]
        for r in range(M):
            for S in itertools.combinations(range(M - 1), r):
                denom = a[i] * math.prod(others[j] for j in S)
                denom *= math.prod(sigma - l for l in range(1, r + 2))
                total += base ** (r + 1 - sigma) / denom
    return total


def zeta_direct(params, s, w, n_max: int = 400, rel_tol: float = 1e-6) -> complex:
    """Barnes multiple zeta by its defining lattice sum.

    Sums ``(w + k.a)^{-s}`` over the box ``[0, n_max]^M`` and bounds the
    remainder by comparison with integrals; raises :class:`AccuracyError`
    when that bound exceeds ``rel_tol`` times the partial sum.
    """
    params = _as_params(params)
    a = params.a
    M = params.M
    s = complex(s)
    w = complex(w)
    if not w.real > 0:
        raise DomainError("zeta_direct needs Re(w) > 0")
    if M == 0:
        return w ** (-s)
    if not s.real > M + 1:
        raise DomainError(f"zeta_direct needs Re(s) > M + 1 = {M + 1}")
    if n_max < 10:
        raise DomainError("n_max must be at least 10")
    k = np.arange(n_max + 1, dtype=float)
    total = 0j
    # sum over the last axis in one vectorised sweep per leading multi-index
    for lead in itertools.product(range(n_max + 1), repeat=M - 1):
        base = w + sum(ki * ai for ki, ai in zip(lead, a[:-1]))
        total += np.sum((base + k * a[-1]) ** (-s))
    bound = _tail_bound(a, s.real, w.real, n_max) * math.exp(abs(s.imag) * math.pi / 2)
    if bound > rel_tol * abs(total):
        raise AccuracyError(
            f"lattice tail bound {bound:.3g} exceeds tolerance; raise n_max", best=total, error=bound
        )
    return total
