"""Adaptive composite Gauss-Legendre quadrature.

Panels are refined by halving.  Each panel is integrated with an ``n``-point
rule on the whole panel and on its two halves; the difference is a
(pessimistic) error estimate.  All panels of one sweep are evaluated in a
single vectorised call of the integrand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and knobs for the integral representations.

    ``split_point`` is the upper end of the numerically integrated range;
    ``None`` lets each routine choose it from its arguments.
    ``tail_index_cutoff`` caps how many lattice exponentials enter the
    analytic tail beyond the split point.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    split_point: float | None = None
    max_refinements: int = 40
    tail_index_cutoff: int = 64
    nodes: int = 20

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.split_point is not None and not self.split_point > 0:
            raise ValueError("split point must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _gl_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_sums(func, lo, hi, n):
    x, w = _gl_rule(n)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * x[None, :]
    vals = func(t.ravel()).reshape(t.shape)
    return half * (vals @ w)


def integrate(func, breakpoints, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Integrate ``func`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``func`` must accept a 1-d array of abscissae.  Returns
    ``(value, error_estimate)``; raises :class:`AccuracyError` (carrying the
    best estimate) when ``max_refinements`` sweeps do not suffice.
    """
    edges = np.asarray(breakpoints, dtype=float)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    n = cfg.nodes
    done_val = 0.0
    done_err = 0.0
    for _ in range(cfg.max_refinements):
        mid = 0.5 * (lo + hi)
        whole = _panel_sums(func, lo, hi, n)
        left = _panel_sums(func, lo, mid, n)
        right = _panel_sums(func, mid, hi, n)
        fine = left + right
        err = np.abs(fine - whole)
        total = done_val + fine.sum()
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if done_err + err.sum() <= tol:
            return total, float(done_err + err.sum())
        # panels already well inside their share of the budget are frozen
        share = 0.5 * tol * (hi - lo) / (edges[-1] - edges[0])
        ok = err <= np.maximum(share, 0.1 * tol / max(err.size, 1))
        done_val = done_val + fine[ok].sum()
        done_err += err[ok].sum()
        lo_b, mid_b, hi_b = lo[~ok], mid[~ok], hi[~ok]
        lo = np.concatenate([lo_b, mid_b])
        hi = np.concatenate([mid_b, hi_b])
        if lo.size == 0:
            return done_val, float(done_err)
    raise AccuracyError(
        "adaptive quadrature did not converge", best=total, error=float(done_err + err.sum())
    )


def geometric_breakpoints(t0: float, t1: float, ratio: float = 2.0, max_width: float | None = None):
    """Panel edges ``t0, t0*r, t0*r^2, ..., t1`` optionally capped in width."""
    pts = [t0]
    while pts[-1] < t1:
        nxt = pts[-1] * ratio
        if max_width is not None:
            nxt = min(nxt, pts[-1] + max_width)
        pts.append(min(nxt, t1))
    return np.asarray(pts)


def regularized_integral(
    series,
    p: int,
    exp_part,
    powers,
    t0: float,
    T: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    max_width: float | None = None,
):
    """``int_0^inf g(t) dt`` for an integrand that is singular-looking at 0.

    ``g(t) = exp_part(t) + sum_k c_k t^{e_k}`` where ``powers`` lists the
    pairs ``(c_k, e_k)`` with ``e_k < -1`` and ``exp_part`` decays
    exponentially.  ``series`` holds the Taylor coefficients of
    ``t^p g(t)``; its first ``p`` coefficients must vanish.  The range
    ``[0, t0]`` is done from the series, ``[t0, T]`` numerically, and the
    power terms on ``[t0, inf)`` exactly.  Returns ``(value, err, residue)``
    with ``residue`` the size of the leading coefficients that should be 0.
    """
    c = series.coeffs
    residue = float(np.max(np.abs(c[:p]))) if p > 0 else 0.0
    j = np.arange(p, c.size)
    terms = c[p:] * t0 ** (j - p + 1) / (j - p + 1)
    head = terms.sum()
    trunc = float(abs(terms[-1]) + abs(terms[-2]))
    body, qerr = integrate(exp_part, geometric_breakpoints(t0, T, max_width=max_width), cfg)
    tail = 0.0
    for coef, e in powers:
        tail = tail - coef * t0 ** (e + 1) / (e + 1)
    return head + body + tail, qerr + trunc, residue
