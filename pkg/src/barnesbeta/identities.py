"""Residual checks for the scaling, multiplication, functional-equation and
Shintani identities of the multiple gamma functions.

The Shintani machinery needs three auxiliary functions of ``(x, y)``:

* ``psi``: a polynomial in ``x`` of degree ``M+1`` with ``log y`` terms,
  the counter-term that makes the infinite product converge;
* ``chi``: a regularised integral with the kernel ``1/(e^{yt} - 1)``;
* ``p_poly``: ``L_{M+1}(w|a,y) - chi(w,y) - L_M(w|a)``, evaluated from its
  own integral (it is again a polynomial of degree ``M+1`` in ``w``).

All comparisons are made on log values.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AccuracyError, DomainError
from .extrapolate import richardson_doubling
from .multigamma import log_gamma, log_multigamma
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, regularized_integral
from .series import (
    GammaParams,
    PowerSeries,
    bernoulli_coeffs,
    bernoulli_number,
    bernoulli_poly,
    kernel_series,
    series_exp,
)

EULER_GAMMA = 0.5772156649015329

_EXTRA = 40
KINDS = ("functional_eq", "scaling", "multiplication", "shintani_gamma")
DEFAULT_W_GRID = (0.5, 1.0, 1.7, 3.0 + 0.5j)


@dataclass(frozen=True)
class IdentityReport:
    kind: str
    residual: float
    points_tested: int
    params_echo: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.residual >= 0:
            raise ValueError("residual must be non-negative")
        if self.points_tested < 1:
            raise ValueError("at least one point must be tested")


def _as_params(params) -> GammaParams:
    return params if isinstance(params, GammaParams) else GammaParams(tuple(params))


def _factor_series(y, order: int, sign: int) -> PowerSeries:
    """``t/(1 - e^{-yt})`` for ``sign=+1`` or ``t/(e^{yt} - 1)`` for ``sign=-1``.

    Complex ``y`` is allowed; only ``n = 1`` differs between the two.
    """
    y = complex(y)
    coeffs = np.empty(order + 1, dtype=complex)
    scale = 1.0 / y
    for n in range(order + 1):
        b = float(bernoulli_number(n))
        if n == 1 and sign > 0:
            b = -b
        coeffs[n] = b * scale / math.factorial(n)
        scale *= y
    return PowerSeries(coeffs)


def _shift(s: PowerSeries, k: int) -> PowerSeries:
    """Multiply by ``t^k`` keeping the order."""
    c = np.zeros_like(s.coeffs)
    c[k:] = s.coeffs[: s.coeffs.size - k]
    return PowerSeries(c)


def _split(radius_periods: Sequence[complex], anchors: Sequence[complex]) -> float:
    big = max(abs(complex(v)) for v in radius_periods)
    t0 = min(1.0, math.pi / (2.0 * big))
    amp = max((abs(complex(v)) for v in anchors), default=0.0)
    if amp > 0:
        t0 = min(t0, 5.0 / amp)
    return t0


def _finish(value, err, residue, scale, cfg, what):
    if residue > 1e-9 * max(1.0, scale):
        raise AccuracyError(f"{what}: series head did not cancel ({residue:.3g})", best=value, error=residue)
    if not np.isfinite(value) or err > max(cfg.abs_tol, cfg.rel_tol * abs(value)):
        raise AccuracyError(f"{what}: error estimate {err:.3g} above tolerance", best=value, error=err)
    return complex(value)


def psi(params, x, y) -> complex:
    """Shintani counter-term ``Psi_{M+1}(x, y|a)`` in closed form.

    ``sum_{m<=M} B_m(x)/m! (-y)^{M-m}/(M-m)! (H_{M-m} - log y)
    + B_{M+1}(x)/(y (M+1)!)`` with ``B_m = B_{M,m}(.|a)``.
    """
    params = _as_params(params)
    M = params.M
    x, y = complex(x), complex(y)
    if not (x.real > 0 and y.real > 0):
        raise DomainError("psi needs Re(x), Re(y) > 0")
    c = bernoulli_coeffs(params.a, x, M + 1).coeffs
    log_y = cmath.log(y)
    total = 0j
    for m in range(M + 1):
        n = M - m
        harmonic = sum(1.0 / l for l in range(1, n + 1))
        total += c[m] * (-y) ** n / math.factorial(n) * (harmonic - log_y)
    return total + c[M + 1] / y


def psi_integral(params, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``Psi_{M+1}`` from its defining integral; an oracle for :func:`psi`."""
    params = _as_params(params)
    a, M = params.a, params.M
    x, y = complex(x), complex(y)
    if not (x.real > 0 and y.real > 0):
        raise DomainError("psi needs Re(x), Re(y) > 0")
    order = M + 1 + _EXTRA
    cx = bernoulli_coeffs(a, x, order).coeffs
    cxy = bernoulli_coeffs(a, x + y, order).coeffs
    poly_x = np.zeros(order + 1, dtype=complex)
    poly_x[: M + 1] = cx[: M + 1]
    sub = np.zeros(order + 1, dtype=complex)
    sub[:M] = cxy[:M]
    series = PowerSeries(poly_x) * series_exp(-y, order) - PowerSeries(sub)
    series = series - _shift(series_exp(-1.0, order) * cxy[M], M)

    def exp_part(t):
        poly = np.polyval(cx[: M + 1][::-1], t)
        return (poly * np.exp(-y * t) - cxy[M] * t**M * np.exp(-t)) / t ** (M + 1)

    powers = [(-cxy[m], m - M - 1) for m in range(M)]
    t0 = _split([y, 1.0], [y, 1.0])
    T = (40.0 + 5.0 * M) / min(y.real, 1.0)
    value, err, residue = regularized_integral(series, M + 1, exp_part, powers, t0, T, cfg)
    value = _finish(value, err, residue, float(np.max(np.abs(cx[: M + 2]))), cfg, "psi_integral")
    return value + cx[M + 1] / y


def chi(params, x, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``chi_{M+1}(x, y|a)``: integral of
    ``[(f e^{-xt} - sum_{m<=M} t^m B_m(x)/m!)/(e^{yt}-1) - t^M B_{M+1}(x) e^{-yt}/(y (M+1)!)]/t^{M+1}``.
    """
    params = _as_params(params)
    a, M = params.a, params.M
    x, y = complex(x), complex(y)
    if not (x.real > 0 and y.real > 0):
        raise DomainError("chi needs Re(x), Re(y) > 0")
    order = M + 2 + _EXTRA
    h = bernoulli_coeffs(a, x, order)
    c = h.coeffs
    hp = np.array(c, dtype=complex)
    hp[: M + 1] = 0.0
    series = PowerSeries(hp) * _factor_series(y, order, -1)
    series = series - _shift(series_exp(-y, order) * (c[M + 1] / y), M + 1)

    av = np.asarray(a)
    poly_c = c[: M + 1][::-1]

    def exp_part(t):
        f = t**M * np.exp(-x * t) / np.prod(-np.expm1(-np.outer(t, av)), axis=1)
        num = (f - np.polyval(poly_c, t)) / np.expm1(y * t)
        return (num - c[M + 1] / y * t**M * np.exp(-y * t)) / t ** (M + 1)

    t0 = _split(list(a) + [y], [x, y])
    T = (40.0 + 5.0 * M) / min(y.real, 1.0)
    max_width = math.pi / abs(x.imag) if x.imag else None
    value, err, residue = regularized_integral(series, M + 2, exp_part, [], t0, T, cfg, max_width)
    return _finish(value, err, residue, float(np.max(np.abs(c[: M + 2]))), cfg, "chi")


def p_poly(params, w, y, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``P_{M+1}(w, y|a) = L_{M+1}(w|a, y) - chi_{M+1}(w, y|a) - L_M(w|a)``.

    Computed from its own integral representation, not from the
    definition, so comparing the two is a genuine check.
    """
    params = _as_params(params)
    a, M = params.a, params.M
    w, y = complex(w), complex(y)
    if not (w.real > 0 and y.real > 0):
        raise DomainError("p_poly needs Re(w), Re(y) > 0")
    order = M + 2 + _EXTRA
    ew = series_exp(-w, order)
    c = (kernel_series(a, order) * ew).coeffs
    d = (kernel_series(a, order) * _factor_series(y, order, +1) * ew).coeffs

    low = np.zeros(order + 1, dtype=complex)
    low[:M] = c[:M]
    top = np.zeros(order + 1, dtype=complex)
    top[M] = c[M]
    dpoly = np.zeros(order + 1, dtype=complex)
    dpoly[: M + 1] = d[: M + 1]
    series = (
        PowerSeries(low) * _factor_series(y, order, +1)
        + PowerSeries(top) * _factor_series(y, order, -1)
        + _shift(series_exp(-1.0, order) * (c[M] - d[M + 1]), M + 1)
        + _shift(series_exp(-y, order) * (c[M + 1] / y), M + 1)
        - PowerSeries(dpoly)
    )

    poly_c = c[: M + 1][::-1]

    def exp_part(t):
        out = np.polyval(poly_c, t) * t / np.expm1(y * t)
        out = out + t ** (M + 1) * ((c[M] - d[M + 1]) * np.exp(-t) + c[M + 1] / y * np.exp(-y * t))
        return out / t ** (M + 2)

    powers = [((c[j - 1] if j > 0 else 0.0) - d[j], j - M - 2) for j in range(M + 1)]
    t0 = _split(list(a) + [y, 1.0], [w])
    T = (40.0 + 5.0 * M) / min(y.real, 1.0)
    value, err, residue = regularized_integral(series, M + 2, exp_part, powers, t0, T, cfg)
    scale = float(np.max(np.abs(np.r_[c[: M + 2], d[: M + 2]])))
    return _finish(value, err, residue, scale, cfg, "p_poly")


def phi(params, w, x, a_next, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Shintani constant term ``phi_{M+1}(w, x|a, a_{M+1})``."""
    params = _as_params(params)
    M = params.M
    b_w = bernoulli_poly(params, M + 1, w)
    b_x = bernoulli_poly(params, M + 1, x)
    gamma_term = EULER_GAMMA / (a_next * math.factorial(M + 1)) * (b_w - b_x)
    return p_poly(params, w, a_next, cfg) + chi(params, x, a_next, cfg) + gamma_term


def _shintani_term(a, w, x, z):
    return log_multigamma(a, w + z) - log_multigamma(a, x + z) + psi(a, x, z) - psi(a, w, z)


def shintani_log_product(
    params,
    w,
    x,
    y,
    k_start: int = 16,
    max_doublings: int = 9,
    tol: float = 1e-9,
):
    """``sum_{k>=1} [L_M(w+ky) - L_M(x+ky) + Psi(x,ky) - Psi(w,ky)]``.

    Summands decay like ``k^{-2}``; partial sums are Richardson-extrapolated
    in ``1/K``.  Returns ``(value, error_estimate, K_max)``; raises
    :class:`TruncationError` if ``tol`` is never met.
    """
    params = _as_params(params)
    a = params.a
    w, x, y = complex(w), complex(x), complex(y)
    if w == x:
        return 0j, 0.0, 0
    state = {"k": 0, "sum": 0j}

    def partial(K):
        while state["k"] < K:
            state["k"] += 1
            state["sum"] += _shintani_term(a, w, x, state["k"] * y)
        return state["sum"]

    res = richardson_doubling(partial, k_start, 1.0, tol, max_doublings, "Shintani product")
    return res.value, res.error, res.K


def _rel(delta: complex) -> float:
    # relative deviation of the exponentiated values
    return abs(cmath.exp(delta) - 1.0)


def identity_residual(kind: str, params, **knobs) -> IdentityReport:
    """Maximum relative residual of one identity over a grid of ``w``.

    Knobs: ``w_grid`` (all kinds), ``kappa`` (scaling), ``k`` (multiplication),
    ``x``, ``a_next``, ``k_start``, ``tol`` (shintani_gamma), ``cfg``.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown identity kind {kind!r}; choose from {KINDS}")
    params = _as_params(params)
    a, M = params.a, params.M
    cfg = knobs.get("cfg", DEFAULT_CONFIG)
    grid = tuple(complex(w) for w in knobs.get("w_grid", DEFAULT_W_GRID))
    if any(not w.real > 0 for w in grid):
        raise DomainError("all grid points need Re(w) > 0")

    def L(aa, w):
        return log_gamma(aa, w, cfg).value

    worst = 0.0
    count = 0
    echo = {"a": a, "w_grid": [str(w) for w in grid]}
    if kind == "functional_eq":
        if M < 1:
            raise DomainError("functional equation needs M >= 1")
        for w in grid:
            for i in range(M):
                delta = L(a, w) - L(params.drop(i).a, w) - L(a, w + a[i])
                worst = max(worst, _rel(delta))
                count += 1
    elif kind == "scaling":
        kappa = float(knobs.get("kappa", 2.0))
        if not kappa > 0:
            raise DomainError("kappa must be positive")
        echo["kappa"] = kappa
        for w in grid:
            lhs = L(params.scaled(kappa).a, kappa * w)
            rhs = L(a, w) - bernoulli_poly(params, M, w) / math.factorial(M) * math.log(kappa)
            worst = max(worst, _rel(lhs - rhs))
            count += 1
    elif kind == "multiplication":
        k = int(knobs.get("k", 2))
        if k < 1:
            raise DomainError("k must be a positive integer")
        echo["k"] = k
        for w in grid:
            lhs = L(a, k * w)
            rhs = -bernoulli_poly(params, M, k * w) / math.factorial(M) * math.log(k)
            for p in itertools.product(range(k), repeat=M):
                rhs += L(a, w + sum(pj * aj for pj, aj in zip(p, a)) / k)
            worst = max(worst, _rel(lhs - rhs))
            count += 1
    else:
        x = complex(knobs.get("x", 1.0))
        a_next = float(knobs.get("a_next", 1.0))
        # quadrature noise in L_M for M >= 2 caps how far the extrapolation can go
        tol = float(knobs.get("tol", 1e-9 if M <= 1 else 1e-7))
        k_start = int(knobs.get("k_start", 16))
        echo.update(x=str(x), a_next=a_next)
        k_used = 0
        for w in grid:
            prod, _, K = shintani_log_product(params, w, x, a_next, k_start=k_start, tol=tol)
            k_used = max(k_used, K)
            rhs = prod + phi(params, w, x, a_next, cfg) + L(a, w)
            lhs = L(a + (a_next,), w)
            worst = max(worst, _rel(lhs - rhs))
            count += 1
        echo["K"] = k_used
    return IdentityReport(kind=kind, residual=float(worst), points_tested=count, params_echo=echo)


__all__ = [
    "EULER_GAMMA",
    "IdentityReport",
    "psi",
    "psi_integral",
    "chi",
    "p_poly",
    "phi",
    "shintani_log_product",
    "identity_residual",
]
