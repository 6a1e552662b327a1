"""Richardson extrapolation of slowly converging partial sums.

A partial sum ``S(K)`` whose remainder behaves like
``c_0 K^{-p} + c_1 K^{-p-1} + ...`` is sampled at ``K = k_start * 2^j``
and the Richardson table is built column by column.  Rounding in the
summands eventually dominates, so the doubling stops once successive
extrapolants drift apart twice in a row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TruncationError


@dataclass(frozen=True)
class Extrapolated:
    value: complex
    error: float
    K: int
    raw: complex


def richardson_doubling(
    partial,
    k_start: int,
    p0: float,
    tol: float,
    max_doublings: int = 9,
    what: str = "series",
) -> Extrapolated:
    """Extrapolate ``partial(K)`` to ``K -> inf``.

    ``partial`` is called with increasing ``K`` and should reuse earlier
    work.  ``p0`` is the leading remainder exponent.  Succeeds once two
    successive diagonal entries agree to ``tol * max(1, |value|)``.
    """
    prev_row: list[complex] = []
    prev_best = None
    best_seen = (math.inf, None)
    worse = 0
    raw = None
    K = k_start
    for j in range(max_doublings + 1):
        K = k_start * 2**j
        raw = partial(K)
        row = [raw]
        for level, prev in enumerate(prev_row, start=1):
            factor = 2.0 ** (p0 + level - 1)
            row.append((factor * row[-1] - prev) / (factor - 1.0))
        prev_row = row
        best = row[-1]
        if prev_best is not None:
            err = abs(best - prev_best)
            if err <= tol * max(1.0, abs(best)):
                return Extrapolated(best, err, K, raw)
            worse = worse + 1 if err > best_seen[0] else 0
            if err < best_seen[0]:
                best_seen = (err, best)
            if worse >= 2:
                break
        prev_best = best
    raise TruncationError(f"{what} did not settle up to K={K}", best=best_seen[1], error=best_seen[0])
