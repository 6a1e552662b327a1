"""Barnes beta distributions through their Mellin transforms.

For periods ``a = (a_1..a_M)``, ``b0 > 0`` and ``b = (b_1..b_N)`` the law
``beta_{M,N}(a, b)`` on ``(0, 1]`` has Mellin transform

    eta(q) = exp(S_N L_M(q) - S_N L_M(0)),

where ``S_N`` is the alternating sum over the ``2^N`` subset shifts
``q + b0 + sum_{j in S} b_j``.  ``-log beta`` is infinitely divisible with
Levy density

    rho(t) = e^{-b0 t} prod_j (1 - e^{-b_j t}) / (t prod_i (1 - e^{-a_i t})).

This module evaluates ``eta`` directly, through two infinite products and
through the Levy integral, plus integer moments and the atom at 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import CapacityError, DomainError
from .extrapolate import richardson_doubling
from .identities import IdentityReport
from .multigamma import log_gamma, log_multigamma_err
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, geometric_breakpoints, integrate

MAX_N = 24
CUT_MARGIN = 1e-9


@dataclass(frozen=True)
class BarnesBetaParams:
    """Parameters ``(a, b0, b)`` of ``beta_{M,N}(a, b)``."""

    a: tuple = ()
    b0: float = 1.0
    b: tuple = ()

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        b0 = float(self.b0)
        for name, vals in (("a", a), ("b", b), ("b0", (b0,))):
            if any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise DomainError(f"{name} entries must be finite and positive, got {vals}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "b0", b0)

    @property
    def M(self) -> int:
        return len(self.a)

    @property
    def N(self) -> int:
        return len(self.b)

    def replace(self, **kw) -> "BarnesBetaParams":
        return BarnesBetaParams(kw.get("a", self.a), kw.get("b0", self.b0), kw.get("b", self.b))

    def drop_a(self, i: int) -> "BarnesBetaParams":
        return self.replace(a=self.a[:i] + self.a[i + 1:])

    def drop_b(self, j: int) -> "BarnesBetaParams":
        return self.replace(b=self.b[:j] + self.b[j + 1:])

    def shift_b0(self, x: float) -> "BarnesBetaParams":
        return self.replace(b0=self.b0 + x)


@dataclass(frozen=True)
class MellinValue:
    q: complex
    value: complex
    est_error: float
    in_strip: bool

    def __complex__(self):
        return complex(self.value)


def _check_q(params: BarnesBetaParams, q: complex):
    if abs(q.imag) <= CUT_MARGIN and q.real <= -params.b0 + CUT_MARGIN:
        raise DomainError(f"q={q} lies on or too close to the cut (-inf, -{params.b0}]")


@lru_cache(maxsize=4096)
def _subset_weights(b: tuple, digits: int = 12):
    """Distinct subset sums of ``b`` with their net signs ``(-1)^{|S|}``."""
    if len(b) > MAX_N:
        raise CapacityError(f"S_N supports N <= {MAX_N}, got N={len(b)}")
    sums = np.zeros(1)
    signs = np.ones(1)
    for bj in b:
        sums = np.concatenate([sums, sums + bj])
        signs = np.concatenate([signs, -signs])
    keyed: dict[float, list] = {}
    for s, g in zip(sums, signs):
        k = round(float(s), digits)
        if k in keyed:
            keyed[k][1] += g
        else:
            keyed[k] = [float(s), g]
    pts = [(v, int(g)) for v, g in keyed.values() if g != 0]
    pts.sort()
    return tuple(pts)


def s_operator(h: Callable, q, b0: float, b: Sequence[float]):
    """``sum_S (-1)^{|S|} h(q + b0 + sum_{j in S} b_j)`` over all subsets ``S``.

    Coinciding subset sums are merged, so repeated ``b`` entries cost less.
    """
    total = 0
    for s, g in _subset_weights(tuple(float(x) for x in b)):
        total = total + g * h(q + b0 + s)
    return total


def sn_log_gamma(a: Sequence[float], q, b0: float, b: Sequence[float]):
    """``(S_N L_M)(q|a, b)`` and an error estimate."""
    val = 0j
    err = 0.0
    for s, g in _subset_weights(tuple(float(x) for x in b)):
        v, e = log_multigamma_err(a, complex(q) + b0 + s)
        val += g * v
        err += abs(g) * e
    return val, err


def _sn_log_gamma_cfg(a, q, b0, b, cfg: QuadratureConfig):
    if cfg is DEFAULT_CONFIG or len(a) <= 1:
        return sn_log_gamma(a, q, b0, b)
    val, err = 0j, 0.0
    for s, g in _subset_weights(tuple(float(x) for x in b)):
        r = log_gamma(a, complex(q) + b0 + s, cfg)
        val += g * r.value
        err += abs(g) * r.est_error
    return val, err


def log_eta(params: BarnesBetaParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``log eta(q)`` (principal continuation from ``q = 0``) and error."""
    q = complex(q)
    _check_q(params, q)
    if q == 0:
        return 0j, 0.0
    vq, eq = _sn_log_gamma_cfg(params.a, q, params.b0, params.b, cfg)
    v0, e0 = _sn_log_gamma_cfg(params.a, 0.0, params.b0, params.b, cfg)
    return vq - v0, eq + e0


def eta(params: BarnesBetaParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG) -> MellinValue:
    """Mellin transform ``E[beta^q] = exp(S_N L_M(q) - S_N L_M(0))``."""
    q = complex(q)
    lv, le = log_eta(params, q, cfg)
    value = cmath.exp(lv)
    return MellinValue(q, value, abs(value) * le, q.real > -params.b0)


def eta_value(params: BarnesBetaParams, q):
    """Plain ``eta(q)``; real when ``q`` is real."""
    v = eta(params, q).value
    return v.real if np.isrealobj(q) else v


# Levy-Khinchine side


def levy_density(params: BarnesBetaParams, t):
    """Levy density of ``-log beta`` at ``t > 0`` (vectorised)."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-params.b0 * t) / t
    for bj in params.b:
        out = out * -np.expm1(-bj * t)
    for ai in params.a:
        out = out / -np.expm1(-ai * t)
    return out


def _levy_breaks(params: BarnesBetaParams, decay: float, q_imag: float = 0.0):
    scale = min((params.b0,) + params.b + params.a)
    t_hi = (46.0 + 2.0 * params.M) / decay
    t_lo = min(1e-6 / max(scale, 1.0), t_hi / 1e9)
    width = math.pi / abs(q_imag) if q_imag else None
    return np.r_[0.0, geometric_breakpoints(t_lo, t_hi, max_width=width)]


def levy_exponent(params: BarnesBetaParams, q, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``int_0^inf (e^{tq} - 1) rho(t) dt``, the log of ``E[beta^{-q}]``.

    Needs ``M <= N`` and ``Re(q) < b0``; ``exp`` of this equals ``eta(-q)``.
    """
    if params.M > params.N:
        raise DomainError("Levy representation needs M <= N")
    q = complex(q)
    if not q.real < params.b0:
        raise DomainError(f"levy_exponent needs Re(q) < b0 = {params.b0}")
    if q == 0:
        return 0j
    decay = params.b0 - q.real if q.real > 0 else params.b0

    def f(t):
        return np.expm1(q * t) * levy_density(params, t)

    val, err = integrate(f, _levy_breaks(params, decay, q.imag), cfg)
    return complex(val)


def levy_cumulant(params: BarnesBetaParams, n: int = 1, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int t^n rho(t) dt``: the ``n``-th cumulant of ``-log beta``."""
    if params.M > params.N and n == 0:
        raise DomainError("Levy mass is infinite for M > N")
    if n < 0 or (n == 0 and params.M == params.N):
        raise DomainError("total Levy mass is infinite when M = N")

    def f(t):
        return t**n * levy_density(params, t)

    val, _ = integrate(f, _levy_breaks(params, params.b0), cfg)
    return float(val)


def levy_mass(params: BarnesBetaParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Total Levy mass ``lambda = int rho``, finite only for ``M < N``."""
    if not params.M < params.N:
        raise DomainError("Levy mass is finite only for M < N")
    return levy_cumulant(params, 0, cfg)


# Lattice products


def _lattice_counts(a: Sequence[float], R: float):
    """Distinct ``Omega = sum n_i a_i <= R`` with multiplicities."""
    M = len(a)
    if M == 0:
        return np.zeros(1), np.ones(1)
    if all(x == a[0] for x in a):
        k = np.arange(int(math.floor(R / a[0] + 1e-9)) + 1)
        mult = special.comb(k + M - 1, M - 1, exact=False)
        return k * a[0], mult
    pts = np.zeros(1)
    for ai in a:
        n = np.arange(int(math.floor(R / ai + 1e-9)) + 1) * ai
        pts = (pts[:, None] + n[None, :]).ravel()
        pts = pts[pts <= R + 1e-9]
    return pts, np.ones_like(pts)


def _subset_log_sum(q: complex, params: BarnesBetaParams, omega: np.ndarray):
    """``sum_S (-1)^{|S|} log(q + b0 + sum_S b + Omega)`` per ``Omega``."""
    out = np.zeros(omega.shape, dtype=complex)
    for s, g in _subset_weights(params.b):
        out += g * np.log(q + params.b0 + s + omega + 0j)
    return out


class _LatticeSum:
    """Incremental ``sum_{Omega <= R} mult * g(Omega)``."""

    def __init__(self, a, g):
        self.a = tuple(a)
        self.g = g
        self.R = -1.0
        self.total = 0j

    def __call__(self, R):
        omega, mult = _lattice_counts(self.a, R)
        sel = omega > self.R + 1e-9 if self.R >= 0 else np.ones(omega.shape, bool)
        if np.any(sel):
            self.total += np.sum(mult[sel] * self.g(omega[sel]))
        self.R = R
        return self.total


def _lattice_extrapolate(a, g, p0, tol, r_start, max_doublings, what):
    if len(a) == 0:
        return complex(g(np.zeros(1))[0]), 0.0, 0
    acc = _LatticeSum(a, g)
    unit = min(a)
    res = richardson_doubling(lambda K: acc(K * unit), r_start, p0, tol, max_doublings, what)
    return res.value, res.error, res.K


def sl_action(
    params: BarnesBetaParams, q, tol: float = 1e-9, r_start: int = 64, max_doublings: int = 8
) -> complex:
    """``exp(-(S_N L_M)(q))`` from the lattice product over ``Omega``; needs ``M < N``."""
    if not params.M < params.N:
        raise DomainError("lattice formula for S_N L_M needs M < N")
    q = complex(q)
    _check_q(params, q)
    val, _, _ = _lattice_extrapolate(
        params.a,
        lambda om: _subset_log_sum(q, params, om),
        params.N - params.M,
        tol,
        r_start,
        max_doublings,
        "S_N lattice product",
    )
    return cmath.exp(val)


def eta_barnes_product(
    params: BarnesBetaParams, q, tol: float = 1e-9, r_start: int = 64, max_doublings: int = 8
):
    """``eta(q)`` as the lattice product of ``eta_{0,N}(q|b0 + Omega)`` factors.

    Truncated at ``Omega <= R`` for doubling ``R`` and extrapolated in
    ``1/R`` (remainder exponent ``N + 1 - M``).  Equal periods use the
    collapsed multiplicity ``C(k+M-1, M-1)``.  Returns ``(value, error, R)``.
    """
    if params.M > params.N:
        raise DomainError("Barnes product needs M <= N")
    q = complex(q)
    _check_q(params, q)

    def g(om):
        return _subset_log_sum(0j, params, om) - _subset_log_sum(q, params, om)

    val, err, K = _lattice_extrapolate(
        params.a, g, params.N + 1 - params.M, tol, r_start, max_doublings, "Barnes product"
    )
    value = cmath.exp(val)
    return value, abs(value) * err, K


def lattice_multiplicity(k: int, M: int) -> int:
    """Number of ``(n_1..n_M) >= 0`` with ``sum n_i = k``, by the composition formula."""
    if M == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 1
    return sum(math.comb(k - 1, m - 1) * math.comb(M, m) for m in range(1, M + 1))


def eta_shintani_product(
    params: BarnesBetaParams,
    q,
    i: int = 0,
    tol: float = 1e-8,
    k_start: int = 32,
    max_doublings: int = 9,
):
    """``eta(q) = prod_{k>=0} eta_{M-1,N}(q + k a_i|a^_i, b) / eta_{M-1,N}(k a_i|a^_i, b)``.

    Returns ``(value, error, K)``.
    """
    if not 1 <= params.M <= params.N:
        raise DomainError("Shintani product needs 1 <= M <= N")
    q = complex(q)
    _check_q(params, q)
    if q == 0:
        return 1.0 + 0j, 0.0, 0
    ai = params.a[i]
    rest = params.drop_a(i)
    state = {"k": 0, "sum": 0j}

    def partial(K):
        while state["k"] < K:
            k = state["k"]
            vq, _ = sn_log_gamma(rest.a, q + k * ai, params.b0, params.b)
            v0, _ = sn_log_gamma(rest.a, k * ai, params.b0, params.b)
            state["sum"] += vq - v0
            state["k"] += 1
        return state["sum"]

    res = richardson_doubling(partial, k_start, params.N + 1 - params.M, tol, max_doublings, "Shintani product")
    value = cmath.exp(res.value)
    return value, abs(value) * res.error, res.K


# Mass at 1


def mass_at_one(params: BarnesBetaParams, method: str = "sn_formula", cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``P[beta = 1]`` for ``M < N``.

    ``method``: ``quadrature`` (``exp(-int rho)``), ``sn_formula``
    (``exp(-S_N L_M(0))``) or ``product`` (lattice product over ``Omega``).
    """
    if not params.M < params.N:
        raise DomainError("beta has no atom at 1 unless M < N")
    if method == "quadrature":
        return math.exp(-levy_mass(params, cfg))
    if method == "sn_formula":
        v, _ = sn_log_gamma(params.a, 0.0, params.b0, params.b)
        return math.exp(-v.real)
    if method == "product":
        return sl_action(params, 0.0).real
    raise DomainError(f"unknown method {method!r}")


# Integer moments


def moment_int(params: BarnesBetaParams, k: int, sign: int = 1, i: int = 0) -> float:
    """``E[beta^{sign * k * a_i}]`` from finite sums of ``S_N L_{M-1}``."""
    if params.M < 1:
        raise DomainError("integer moments in units of a_i need M >= 1")
    if k < 1:
        raise DomainError("k must be a positive integer")
    ai = params.a[i]
    rest = params.drop_a(i).a
    if sign > 0:
        s = sum(sn_log_gamma(rest, l * ai, params.b0, params.b)[0] for l in range(k))
        return math.exp(-s.real)
    if not k * ai < params.b0:
        raise DomainError("negative moment needs k a_i < b0")
    s = sum(sn_log_gamma(rest, -(l + 1) * ai, params.b0, params.b)[0] for l in range(k))
    return math.exp(s.real)


def moment_unit_periods(params: BarnesBetaParams, n: int) -> float:
    """``E[beta^n]`` for ``a = (1, .., 1)`` from the nested-product formula.

    The nested product over ``n-1 >= i_1 > .. > i_M`` is collapsed: the
    chain count ending at ``i_M = j`` is ``C(n-1-j, M-1)``.
    """
    M = params.M
    if M < 1 or any(x != 1.0 for x in params.a):
        raise DomainError("this formula needs a_i = 1 for all i and M >= 1")
    if n < 1:
        raise DomainError("n must be a positive integer")
    log_m = 0.0
    for i in range(1, M):
        v, _ = sn_log_gamma((1.0,) * (M - i), 0.0, params.b0, params.b)
        log_m += (-1) ** i * math.comb(n, i) * v.real
    for j in range(n):
        w = math.comb(n - 1 - j, M - 1)
        if w:
            v, _ = sn_log_gamma((), float(j), params.b0, params.b)
            log_m += (-1) ** M * w * v.real
    return math.exp(log_m)


def moment_pochhammer22(b0: float, b1: float, b2: float, k: int) -> float:
    """``E[beta_{2,2}(1, b)^k]`` in generalized hypergeometric form."""
    lg = special.gammaln

    def log_poch(x, i):
        return lg(x + i) - lg(x)

    base = lg(b0 + b1) + lg(b0 + b2) - lg(b0) - lg(b0 + b1 + b2)
    total = k * base
    for i in range(k):
        total += log_poch(b0 + b1, i) + log_poch(b0 + b2, i) - log_poch(b0, i) - log_poch(b0 + b1 + b2, i)
    return math.exp(total)


def moment_barnes_product(params: BarnesBetaParams, k: int, i: int = 0, tol: float = 1e-9) -> float:
    """``E[beta^{k a_i}]`` via truncated lattice products for ``S_N L_{M-1}``."""
    if not 1 <= params.M <= params.N:
        raise DomainError("needs 1 <= M <= N")
    ai = params.a[i]
    rest = params.drop_a(i)
    out = 1.0
    for l in range(k):
        out *= sl_action(rest, l * ai, tol=tol).real
    return out


# Identity residuals

BETA_KINDS = ("funceq", "algebra1", "algebra2", "algebra3", "algebra4", "scaling", "reduction")
DEFAULT_Q_GRID = (0.3, 0.7, 1.5, 0.5 + 0.5j)


def _eta_c(params, q):
    return eta(params, q).value


def beta_identity_residual(kind: str, params: BarnesBetaParams, **knobs) -> IdentityReport:
    """Max relative residual of a Barnes beta identity over a grid of ``q``.

    Knobs: ``q_grid``, ``i`` (period index), ``j`` (b index), ``kappa``,
    ``x`` (shift of the second functional equation).
    """
    if kind not in BETA_KINDS:
        raise DomainError(f"unknown kind {kind!r}; choose from {BETA_KINDS}")
    grid = tuple(complex(q) for q in knobs.get("q_grid", DEFAULT_Q_GRID))
    i = int(knobs.get("i", 0))
    j = int(knobs.get("j", 0))
    p = params
    pairs = []
    echo = {"a": p.a, "b0": p.b0, "b": p.b, "q_grid": [str(q) for q in grid]}
    needs_a = kind in ("funceq", "algebra2", "algebra3", "algebra4", "reduction")
    needs_b = kind in ("algebra1", "algebra3", "algebra4", "reduction")
    if needs_a and not 0 <= i < p.M:
        raise DomainError(f"{kind} needs a valid period index i (M={p.M})")
    if needs_b and not 0 <= j < p.N:
        raise DomainError(f"{kind} needs a valid b index j (N={p.N})")

    if kind == "funceq":
        x = float(knobs.get("x", 0.6))
        rest = p.drop_a(i)
        for q in grid:
            corr = sn_log_gamma(rest.a, q, p.b0, p.b)[0]
            pairs.append((_eta_c(p, q + p.a[i]), _eta_c(p, q) * cmath.exp(-corr)))
            pairs.append((_eta_c(p.shift_b0(x), q) * _eta_c(p, x), _eta_c(p, q + x)))
        echo["x"] = x
    elif kind == "algebra1":
        lhs_p = p.drop_b(j)
        other = p.drop_b(j).shift_b0(p.b[j])
        for q in grid:
            pairs.append((_eta_c(lhs_p, q), _eta_c(p, q) * _eta_c(other, q)))
    elif kind == "algebra2":
        for q in grid:
            pairs.append((_eta_c(p, q), _eta_c(p.shift_b0(p.a[i]), q) * _eta_c(p.drop_a(i), q)))
    elif kind in ("algebra3", "algebra4"):
        bj = list(p.b)
        bj[j] += p.a[i]
        lhs_p = p.replace(b=tuple(bj))
        if kind == "algebra3":
            first = p
            second = p.drop_a(i).drop_b(j).shift_b0(p.b[j])
        else:
            first = p.shift_b0(p.a[i])
            second = p.drop_a(i).drop_b(j)
        for q in grid:
            pairs.append((_eta_c(lhs_p, q), _eta_c(first, q) * _eta_c(second, q)))
    elif kind == "scaling":
        kappa = float(knobs.get("kappa", 2.0))
        if not kappa > 0:
            raise DomainError("kappa must be positive")
        scaled = BarnesBetaParams(tuple(kappa * x for x in p.a), kappa * p.b0, tuple(kappa * x for x in p.b))
        for q in grid:
            pairs.append((_eta_c(scaled, kappa * q), _eta_c(p, q)))
        echo["kappa"] = kappa
    else:
        ratio = p.b[j] / p.a[i]
        n = round(ratio)
        if n < 1 or abs(ratio - n) > 1e-12 * max(1.0, ratio):
            raise DomainError("reduction needs b_j to be a positive integer multiple of a_i")
        base = p.drop_a(i).drop_b(j)
        for q in grid:
            rhs = 1.0 + 0j
            for k in range(n):
                rhs *= _eta_c(base.shift_b0(k * p.a[i]), q)
            pairs.append((_eta_c(p, q), rhs))
        echo["n"] = n

    worst = max(abs(l - r) / max(abs(r), 1e-300) for l, r in pairs)
    return IdentityReport(kind=kind, residual=float(worst), points_tested=len(pairs), params_echo=echo)
