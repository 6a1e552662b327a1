"""Truncated power series and multiple Bernoulli polynomials.

The Taylor data of ``f(t) exp(-x t)`` with
``f(t) = t^M / prod_j (1 - exp(-a_j t))`` is assembled here from exact
Bernoulli numbers.  Everything downstream that needs ``B_{M,m}(x|a)`` or the
small-``t`` expansion of an integrand goes through this module.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "GammaParams",
    "PowerSeries",
    "bernoulli_number",
    "series_of_factor",
    "series_exp",
    "series_mul",
    "kernel_series",
    "bernoulli_coeffs",
    "bernoulli_poly",
]

_BERNOULLI: list[Fraction] = []
_BERNOULLI_LOCK = threading.Lock()
_BERNOULLI_PRELOAD = 32


def _extend_bernoulli(n: int) -> None:
    # B_1 = -1/2 convention; sum_{k<=m} C(m+1, k) B_k = 0.
    with _BERNOULLI_LOCK:
        m = len(_BERNOULLI)
        while m <= n:
            if m == 0:
                _BERNOULLI.append(Fraction(1))
            else:
                acc = Fraction(0)
                binom = 1
                for k in range(m):
                    acc += binom * _BERNOULLI[k]
                    binom = binom * (m + 1 - k) // (k + 1)
                _BERNOULLI.append(-acc / (m + 1))
            m += 1


_extend_bernoulli(_BERNOULLI_PRELOAD)


def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` with ``B_1 = -1/2``."""
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if n >= len(_BERNOULLI):
        _extend_bernoulli(n)
    return _BERNOULLI[n]


@dataclass(frozen=True)
class GammaParams:
    """Periods ``a = (a_1, ..., a_M)`` of a Barnes multiple gamma function."""

    a: tuple[float, ...] = ()

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if any(not (x > 0 and math.isfinite(x)) for x in a):
            raise DomainError(f"periods must be finite and positive, got {a}")
        object.__setattr__(self, "a", a)

    @property
    def M(self) -> int:
        return len(self.a)

    def drop(self, i: int) -> "GammaParams":
        """Return the parameters with period ``i`` removed."""
        return GammaParams(self.a[:i] + self.a[i + 1:])

    def scaled(self, kappa: float) -> "GammaParams":
        return GammaParams(tuple(kappa * x for x in self.a))


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``c_0..c_order`` of a truncated Taylor series in ``t``."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1])

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order) + 1
        return PowerSeries(self.coeffs[:n] + other.coeffs[:n])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order) + 1
        return PowerSeries(self.coeffs[:n] - other.coeffs[:n])

    def __call__(self, t):
        """Horner evaluation, vectorised over ``t``."""
        t = np.asarray(t)
        out = np.zeros(np.broadcast(t, self.coeffs[0]).shape, dtype=np.result_type(t, self.coeffs))
        for c in self.coeffs[::-1]:
            out = out * t + c
        return out


def series_mul(u: PowerSeries, v: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the smaller of the two orders."""
    n = min(u.order, v.order) + 1
    return PowerSeries(np.convolve(u.coeffs[:n], v.coeffs[:n])[:n])


def series_of_factor(a_j: float, order: int) -> PowerSeries:
    """Taylor coefficients of ``t / (1 - exp(-a_j t))`` up to ``t^order``.

    ``t/(1-e^{-at}) = sum_n (-1)^n B_n a^{n-1} t^n / n!``; only ``n = 1``
    feels the sign since odd Bernoulli numbers beyond the first vanish.
    """
    if not a_j > 0:
        raise DomainError(f"period must be positive, got {a_j}")
    if order < 0:
        raise DomainError("order must be non-negative")
    coeffs = np.empty(order + 1)
    scale = 1.0 / a_j
    for n in range(order + 1):
        b = bernoulli_number(n)
        if n == 1:
            b = -b
        coeffs[n] = float(b) * scale / math.factorial(n)
        scale *= a_j
    return PowerSeries(coeffs)


def series_exp(c: complex, order: int) -> PowerSeries:
    """Taylor coefficients of ``exp(c t)``."""
    coeffs = np.empty(order + 1, dtype=complex if isinstance(c, complex) else float)
    term = 1.0
    for n in range(order + 1):
        coeffs[n] = term
        term = term * c / (n + 1)
    return PowerSeries(coeffs)


def kernel_series(a: Sequence[float], order: int) -> PowerSeries:
    """Series of ``f(t) = t^M / prod_j (1 - exp(-a_j t))``."""
    out = PowerSeries(np.r_[1.0, np.zeros(order)])
    for a_j in a:
        out = out * series_of_factor(a_j, order)
    return out


def bernoulli_coeffs(a: Sequence[float], x, order: int) -> PowerSeries:
    """Series of ``f(t) exp(-x t)``; coefficient ``m`` is ``B_{M,m}(x|a)/m!``."""
    x = complex(x) if np.iscomplexobj(x) else float(x)
    return kernel_series(a, order) * series_exp(-x, order)


def bernoulli_poly(params: GammaParams | Sequence[float], m: int, x, order: int | None = None):
    """Multiple Bernoulli polynomial ``B_{M,m}(x|a)``.

    ``order`` defaults to ``m + 4``; the extra terms never influence
    coefficient ``m`` but make accidental order misuse visible in tests.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    a = params.a if isinstance(params, GammaParams) else tuple(params)
    if order is None:
        order = m + 4
    if order < m:
        raise DomainError("series order below requested coefficient")
    c = bernoulli_coeffs(a, x, order).coeffs[m] * math.factorial(m)
    return c if np.iscomplexobj(c) else float(c)
