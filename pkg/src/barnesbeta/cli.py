"""Command-line front end.

Every check is reported as a record
``{name, paper_ref, lhs, rhs, residual, threshold, pass}``; records are
sorted by name so identical flags give byte-identical JSON.  Exit status:
0 when every check passes, 1 when some check fails, 2 on domain errors,
3 on accuracy failures, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from . import identities, mellin, multigamma, sampling, selberg, series, xi
from .errors import AccuracyError, BarnesBetaError, DomainError
from .mellin import BarnesBetaParams
from .sampling import DEFAULT_SEED, MomentAccumulator, RngStream

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_ACCURACY, EXIT_USAGE = 0, 1, 2, 3, 64
SUITES = ("gamma", "beta", "selberg", "critical", "xi")
MC_STREAMS = 8


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    paper_ref: str
    lhs: object
    rhs: object
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.threshold)

    def record(self) -> dict:
        d = asdict(self)
        d["lhs"], d["rhs"] = _jsonable(self.lhs), _jsonable(self.rhs)
        d["residual"] = float(self.residual)
        d["pass"] = self.passed
        return d


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return v.real if v.imag == 0 else format_complex(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _rel(lhs, rhs) -> float:
    return abs(complex(lhs) - complex(rhs)) / max(abs(complex(rhs)), 1e-300)


def _value_check(name, ref, lhs, rhs, threshold) -> Check:
    return Check(name, ref, lhs, rhs, _rel(lhs, rhs), threshold)


def _report_check(name, ref, report, threshold) -> Check:
    # identity residuals carry the residual itself on the lhs
    return Check(name, ref, report.residual, 0.0, report.residual, threshold)


# parsing


def format_complex(z: complex) -> str:
    """``re+imi`` form, the same literal the parser accepts."""
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1.0, z.imag) < 0) else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_number(text: str) -> complex | float:
    """``"1.5"`` or ``"0.5+2i"`` (``j`` also accepted)."""
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        z = complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc
    return z.real if z.imag == 0 and "j" not in t else z


def parse_vector(text: str) -> list:
    if text is None or text.strip() == "":
        return []
    return [parse_number(p) for p in text.split(",")]


def _real_vector(text: str) -> tuple:
    vals = parse_vector(text)
    if any(isinstance(v, complex) for v in vals):
        raise UsageError("periods must be real")
    return tuple(float(v) for v in vals)


# verification suites


def suite_gamma(tol=None) -> list[Check]:
    t = (lambda d: tol if tol is not None else d)
    out = []
    worst = 0.0
    for a in (0.5, 1.0, 2.5):
        for w in (0.3, 1.7, 4.2):
            lhs = np.exp(multigamma.log_gamma((a,), w).value).real
            worst = max(worst, _rel(lhs, multigamma.gamma1_closed(a, w)))
    out.append(Check("gamma.gamma1_closed_form", "Gamma_1 closed form", worst, 0.0, worst, t(1e-8)))
    for a in ((1.0,), (1.0, 2.0), (1.0, 1.5, 2.0)):
        r = identities.identity_residual("functional_eq", a)
        out.append(_report_check(f"gamma.functional_eq.M{len(a)}", "Gamma_M functional equation", r, t(1e-8)))
    for a in ((1.0,), (1.0, 2.0)):
        r = identities.identity_residual("scaling", a, kappa=2.0)
        out.append(_report_check(f"gamma.scaling.M{len(a)}", "Gamma_M scaling", r, t(1e-7)))
        for k in (2, 3):
            r = identities.identity_residual("multiplication", a, k=k)
            out.append(_report_check(f"gamma.multiplication.M{len(a)}.k{k}", "Gamma_M multiplication", r, t(1e-7)))
    r = identities.identity_residual("shintani_gamma", (1.0,), x=1.0, a_next=1.0)
    out.append(_report_check("gamma.shintani.M1", "Shintani factorization of Gamma_2", r, t(1e-5)))
    worst = 0.0
    for a1, a2, x in ((1.0, 1.0, 0.3), (1.0, 2.5, 1.7), (0.5, 3.0, 2.0 + 1.0j)):
        closed = x * x / (a1 * a2) - x * (a1 + a2) / (a1 * a2) + (a1 * a1 + 3 * a1 * a2 + a2 * a2) / (6 * a1 * a2)
        worst = max(worst, _rel(series.bernoulli_poly((a1, a2), 2, x), closed))
    out.append(Check("gamma.bernoulli_b22", "B_{2,2} closed form", worst, 0.0, worst, t(1e-12)))
    out.append(_value_check("gamma.barnes_g5", "Barnes G at 5", multigamma.barnes_g(5.0), 12.0, t(1e-10)))
    return out


def _eta_oracle22(tau, b0, b1, b2, q, cfg):
    # explicit four-Gamma_2 ratio for M = N = 2, a = (1, tau)
    def L(w):
        return multigamma.log_gamma((1.0, tau), w, cfg).value

    v = L(q + b0) - L(b0) + L(b0 + b1) - L(q + b0 + b1) + L(b0 + b2) - L(q + b0 + b2)
    v += L(q + b0 + b1 + b2) - L(b0 + b1 + b2)
    return np.exp(v)


def _eta_oracle_m1(a, b0, b, q):
    # S_N of the closed-form log Gamma_1
    def L(w):
        return multigamma.log_gamma1_closed(a, w)

    return np.exp(mellin.s_operator(L, q, b0, b) - mellin.s_operator(L, 0.0, b0, b))


ETA_SET = (
    ("M1N1", BarnesBetaParams((1.0,), 1.0, (1.0,))),
    ("M1N2", BarnesBetaParams((1.0,), 1.0, (1.0, 2.0))),
    ("M2N2", BarnesBetaParams((1.0, 2.0), 1.0, (1.0, 1.0))),
)
ETA_Q = (0.5, 1.0, 0.5 + 0.5j)


def suite_beta(tol=None) -> list[Check]:
    t = (lambda d: tol if tol is not None else d)
    cfg = multigamma.DEFAULT_CONFIG.__class__(split_point=30.0)
    out = []
    for label, p in ETA_SET:
        d_err = s_err = b_err = 0.0
        for q in ETA_Q:
            direct = mellin.eta(p, q).value
            if p.M == 2:
                oracle = _eta_oracle22(p.a[1], p.b0, p.b[0], p.b[1], q, cfg)
            else:
                oracle = _eta_oracle_m1(p.a[0], p.b0, p.b, q)
            d_err = max(d_err, _rel(direct, oracle))
            s_err = max(s_err, _rel(mellin.eta_shintani_product(p, q)[0], direct))
            b_err = max(b_err, _rel(mellin.eta_barnes_product(p, q)[0], direct))
        out.append(Check(f"beta.eta_direct.{label}", "eta from S_N L_M", d_err, 0.0, d_err, t(1e-8)))
        out.append(Check(f"beta.eta_shintani.{label}", "eta Shintani product", s_err, 0.0, s_err, t(1e-5)))
        out.append(Check(f"beta.eta_barnes.{label}", "eta Barnes lattice product", b_err, 0.0, b_err, t(1e-4)))
    anchors = (
        ("M0N1", BarnesBetaParams((), 1.0, (1.0,)), 0.5),
        ("M0N2", BarnesBetaParams((), 1.0, (1.0, 1.0)), 0.75),
        ("M1N2", BarnesBetaParams((1.0,), 1.0, (1.0, 2.0)), None),
    )
    for label, p, exact in anchors:
        vals = {m: mellin.mass_at_one(p, m) for m in ("quadrature", "sn_formula", "product")}
        spread = max(vals.values()) - min(vals.values())
        out.append(Check(f"beta.mass_at_one.{label}", "atom at 1, three routes", spread, 0.0, spread, t(1e-6)))
        if exact is not None:
            out.append(_value_check(f"beta.mass_at_one_exact.{label}", "atom at 1 closed form",
                                    vals["sn_formula"], exact, t(1e-10)))
    for label, p in (("M0N1", anchors[0][1]), ("M1N2", anchors[2][1])):
        worst = 0.0
        for q in (0.5, -0.7, 0.3):
            worst = max(worst, _rel(np.exp(mellin.levy_exponent(p, q)), mellin.eta(p, -q).value))
        out.append(Check(f"beta.levy.{label}", "Levy-Khinchine exponent vs eta(-q)", worst, 0.0, worst, t(1e-7)))
    p22 = ETA_SET[2][1]
    for kind in ("funceq", "algebra1", "algebra2", "algebra3", "algebra4", "scaling"):
        r = mellin.beta_identity_residual(kind, p22)
        out.append(_report_check(f"beta.identity.{kind}", f"Barnes beta {kind}", r, t(1e-7)))
    red = BarnesBetaParams((1.0, 1.0), 1.0, (2.0, 0.7))
    r = mellin.beta_identity_residual("reduction", red)
    out.append(_report_check("beta.identity.reduction", "Barnes beta reduction", r, t(1e-7)))
    return out


def suite_selberg(tol=None) -> list[Check]:
    t = (lambda d: tol if tol is not None else d)
    out = []
    p = selberg.SelbergParams(1.5)
    out.append(_value_check("selberg.moment_pos.l1", "positive Selberg moment",
                            selberg.selberg_mellin(p, 1.0), selberg.selberg_moment(p, 1), t(1e-8)))
    for l in (1, 2):
        out.append(_value_check(f"selberg.moment_neg.l{l}", "negative Selberg moment",
                                selberg.selberg_mellin(p, -float(l)), selberg.selberg_moment(p, l, -1), t(1e-8)))
    pm = selberg.MasterParams(1.0, 2.0, 3.0, 4.0)
    out.append(_value_check("selberg.master_factorization", "two-period master factorization",
                            selberg.master_mellin(pm, 0.5), selberg.master_factor_mellin(pm, 0.5), t(1e-7)))
    r = selberg.selberg_identity_residual("infinite_product", selberg.SelbergParams(1.5, 0.1, 0.2), q_grid=(0.3,))
    out.append(_report_check("selberg.infinite_product", "Selberg infinite product", r, t(1e-4)))
    p2 = selberg.SelbergParams(2.0)
    for kind in ("funceq_tau", "funceq_one"):
        r = selberg.selberg_identity_residual(kind, p2, q_grid=(0.4,))
        out.append(_report_check(f"selberg.{kind}", f"Selberg {kind}", r, t(1e-7)))
    r = selberg.selberg_identity_residual("involution", selberg.SelbergParams(2.0, 0.1, 0.1))
    out.append(_report_check("selberg.involution", "involution tau -> 1/tau", r, t(1e-7)))
    r = selberg.selberg_identity_residual("involution", selberg.SelbergParams(1.0, 0.1, 0.1))
    out.append(_report_check("selberg.involution_fixed_point", "involution at tau = 1", r, 0.0))
    return out


def suite_critical(tol=None) -> list[Check]:
    t = (lambda d: tol if tol is not None else d)
    out = [
        _value_check("critical.mellin_m1", "critical law at q=-1", selberg.critical_mellin(-1.0), 24.0, t(1e-6)),
        _value_check("critical.mellin_m2", "critical law at q=-2", selberg.critical_mellin(-2.0), 21600.0, t(1e-6)),
    ]
    for kind in selberg.CRITICAL_KINDS:
        r = selberg.critical_identity_residual(kind)
        thr = 1e-4 if kind == "infinite_product" else 1e-8
        out.append(_report_check(f"critical.{kind}", f"critical law {kind}", r, t(thr)))
    for d in (0.4, 0.5, 0.6):
        pr = selberg.beta22_delta_params(d)
        for n in (2, 3):
            out.append(Check(f"critical.cumulant.n{n}.delta{d}", "beta22(delta) cumulant via C_2",
                             selberg.beta22_delta_cumulant(n, d), selberg.numerical_cumulant(pr, n),
                             abs(selberg.beta22_delta_cumulant(n, d) - selberg.numerical_cumulant(pr, n)), t(1e-4)))
    worst = 0.0
    for q in (0.5, -0.2, 1.3):
        vals = [selberg.beta22_delta_mellin(q, 0.5, m) for m in selberg.BETA22_METHODS]
        worst = max(worst, (max(vals) - min(vals)) / vals[1])
    out.append(Check("critical.beta22_three_routes", "beta22(delta) Mellin transform, three routes",
                     worst, 0.0, worst, t(1e-6)))
    return out


def suite_xi(tol=None) -> list[Check]:
    t = (lambda d: tol if tol is not None else d)
    out = [
        _value_check("xi.xi2", "xi(2) = pi/6", xi.xi(2.0), math.pi / 6.0, t(1e-10)),
        Check("xi.theta10", "theta_10(1) vs theta(1)", xi.theta(1.0, 10), xi.theta(1.0),
              abs(xi.theta(1.0, 10) - xi.theta(1.0)), t(1e-8)),
    ]
    worst = 0.0
    for s in (-4.3, -1.7, -0.6, 0.2, 0.35):
        # defining formula on the left, so zeta runs through its reflection route
        direct = 0.5 * s * (s - 1.0) * math.pi ** (-s / 2.0) * math.gamma(s / 2.0) * xi.zeta(s)
        worst = max(worst, _rel(direct, xi.xi(1.0 - s)))
    out.append(Check("xi.symmetry", "xi(s) = xi(1-s)", worst, 0.0, worst, t(1e-10)))
    closed = xi.s2_delta_transform("laplace_closed", 1.0, 0.5)
    levy = xi.s2_delta_transform("laplace_levy", 1.0, 0.5)
    out.append(_value_check("xi.s2_delta_laplace", "S_2(delta) Laplace, closed vs Levy", levy, closed, t(1e-6)))
    for q in (1, 2):
        r = xi.t_delta_functional_residual(q, 0.1, method="exact")
        out.append(_report_check(f"xi.t_delta_funceq_exact.q{q}", "T(delta) functional equation", r, t(1e-8)))
    worst = 0.0
    for M in (1, 2, 3):
        p = xi.beta_m_delta(M, 1.0)
        tt = np.array([0.05, 0.3, 1.0, 2.5])
        ratio = mellin.levy_density(p, tt) / (np.exp(-tt) * xi.theta(math.pi * tt / 2.0, M) / tt)
        worst = max(worst, float(np.max(np.abs(ratio - 1.0))))
    out.append(Check("xi.beta_m_levy_density", "beta_M(delta) Levy density vs theta_M", worst, 0.0, worst, t(1e-10)))
    return out


SUITE_FUNCS: dict[str, Callable] = {
    "gamma": suite_gamma,
    "beta": suite_beta,
    "selberg": suite_selberg,
    "critical": suite_critical,
    "xi": suite_xi,
}


# Monte Carlo


def mc_moments(sampler: Callable, qs, n: int, seed: int, n_streams: int = MC_STREAMS) -> dict:
    """Per-``q`` SampleStats of ``X^q`` over ``n`` draws split into fixed streams."""
    base = RngStream(seed, 0)
    sizes = [n // n_streams + (1 if k < n % n_streams else 0) for k in range(n_streams)]

    def task(job):
        idx, stream = job
        accs = [MomentAccumulator() for _ in qs]
        gen = stream.generator()
        left = sizes[idx]
        while left > 0:
            m = min(left, 200_000)
            x = sampler(gen, m)
            for acc, q in zip(accs, qs):
                acc.update(x**q)
            left -= m
        return accs

    parts = _map_streams(task, [(k, base.child(k)) for k in range(n_streams)])
    out = {}
    for j, q in enumerate(qs):
        total = MomentAccumulator()
        for part in parts:
            total.merge(part[j])
        out[q] = total.stats()
    return out


def _map_streams(task, streams):
    threads = min(sampling.thread_count(), len(streams))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(task, streams))
    return [task(s) for s in streams]


def _mc_checks(prefix, ref, sampler, analytic: dict, n, seed, z_max=3.0) -> list[Check]:
    stats = mc_moments(sampler, tuple(analytic), n, seed)
    out = []
    for q, exact in analytic.items():
        s = stats[q]
        z = abs(s.mean - exact) / s.stderr if s.stderr > 0 else math.inf
        out.append(Check(f"{prefix}.mc_q{q:+g}", ref, s.mean, exact, z, z_max))
    return out


# output


def _emit(payload: dict, fmt: str, path: str | None, deterministic: bool):
    if not deterministic:
        payload = dict(payload, generated=time.strftime("%Y-%m-%dT%H:%M:%S%z"))
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        rows = payload.get("checks") or payload.get("rows") or []
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow(r)
        text = buf.getvalue()
    else:
        lines = []
        for r in payload.get("checks", []):
            status = "PASS" if r["pass"] else "FAIL"
            lines.append(f"{status}  {r['name']}: residual={r['residual']:.3e} threshold={r['threshold']:.1e}")
        for r in payload.get("rows", []):
            lines.append("  ".join(f"{k}={_short(v)}" for k, v in r.items()))
        for k, v in payload.items():
            if k not in ("checks", "rows"):
                lines.append(f"{k}: {v}")
        text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _short(v):
    # text output rounds to 7 significant digits; JSON keeps full precision
    return f"{v:.7g}" if isinstance(v, float) else v


def _check_payload(checks: list[Check]) -> tuple[dict, int]:
    checks = sorted(checks, key=lambda c: c.name)
    records = [c.record() for c in checks]
    ok = all(r["pass"] for r in records)
    if not records:
        return {}, EXIT_OK
    summary = {"total": len(records), "passed": sum(r["pass"] for r in records)}
    return {"checks": records, "summary": summary}, (EXIT_OK if ok else EXIT_FAIL)


# subcommands


def _beta_params(args) -> BarnesBetaParams:
    a = _real_vector(args.a)
    b = _real_vector(args.b)
    if args.M is not None and args.M != len(a):
        raise UsageError(f"--M {args.M} does not match {len(a)} periods in --a")
    if args.N is not None and args.N != len(b):
        raise UsageError(f"--N {args.N} does not match {len(b)} entries in --b")
    return BarnesBetaParams(a, args.b0, b)


def cmd_gamma(args):
    a = _real_vector(args.a)
    rows = []
    for w in parse_vector(args.w):
        if args.kind == "G":
            rows.append({"w": _jsonable(w), "G": _jsonable(multigamma.barnes_g(w))})
            continue
        r = multigamma.log_gamma(a, w)
        row = {"w": _jsonable(w), "log_gamma": _jsonable(r.value), "est_error": r.est_error}
        if args.kind == "gamma":
            row["gamma"] = _jsonable(np.exp(r.value))
        rows.append(row)
    return {"a": list(a), "rows": rows}, EXIT_OK


def cmd_eta(args):
    p = _beta_params(args)
    rows = []
    for q in parse_vector(args.q):
        v = mellin.eta(p, q)
        rows.append({"q": _jsonable(q), "eta": _jsonable(v.value), "est_error": v.est_error, "in_strip": v.in_strip})
    return {"a": list(p.a), "b0": p.b0, "b": list(p.b), "rows": rows}, EXIT_OK


def cmd_moments(args):
    p = _beta_params(args)
    rows = []
    for k in range(1, args.k + 1):
        v = mellin.moment_int(p, k, args.sign, args.i)
        q = args.sign * k * p.a[args.i]
        rows.append({"k": k, "q": q, "moment": v, "eta": _jsonable(mellin.eta(p, q).value)})
    return {"rows": rows}, EXIT_OK


def cmd_mass(args):
    p = _beta_params(args)
    methods = ("quadrature", "sn_formula", "product") if args.method == "all" else (args.method,)
    return {"rows": [{"method": m, "mass": mellin.mass_at_one(p, m)} for m in methods]}, EXIT_OK


def _sampler_for(args) -> tuple[Callable, str]:
    if args.law == "beta":
        p = _beta_params(args)
        return (lambda gen, m: sampling.sample_beta(p, gen, m, K=args.K)), "beta"
    if args.law == "selberg":
        p = selberg.SelbergParams(args.tau, args.lambda1, args.lambda2)
        return (lambda gen, m: selberg.selberg_sample(p, gen, m, K=args.K)), "selberg"
    if args.law == "critical":
        return (lambda gen, m: selberg.critical_sample(gen, m, K=args.K)), "critical"
    if args.law == "t_delta":
        p = xi.TDeltaParams(args.delta)
        return (lambda gen, m: xi.t_delta_sample(p, gen, m)), "t_delta"
    return (lambda gen, m: sampling.sample_elementary(args.law, gen, m)), args.law


def cmd_sample(args):
    sampler, label = _sampler_for(args)
    gen = RngStream(args.seed, args.stream).generator()
    x = sampler(gen, args.n)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "value"])
            for i, v in enumerate(x):
                w.writerow([i, repr(float(v))])
    acc = MomentAccumulator().update(x)
    s = acc.stats()
    return {"law": label, "seed": args.seed, "stream": args.stream,
            "stats": {"n": s.n, "mean": s.mean, "variance": s.variance, "stderr": s.stderr}}, EXIT_OK


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    checks = []
    for name in names:
        checks.extend(SUITE_FUNCS[name](args.tol))
    return _check_payload(checks)


def cmd_selberg(args):
    p = selberg.SelbergParams(args.tau, args.lambda1, args.lambda2)
    qs = [float(q.real) if isinstance(q, complex) else float(q) for q in parse_vector(args.q)]
    rows = [{"q": q, "analytic": selberg.selberg_mellin(p, q)} for q in qs]
    checks = []
    if args.mc:
        analytic = {q: selberg.selberg_mellin(p, q) for q in qs}
        checks = _mc_checks("selberg", "Selberg law, MC vs Mellin transform",
                            lambda gen, m: selberg.selberg_sample(p, gen, m), analytic, args.mc, args.seed)
    payload, code = _check_payload(checks)
    payload.update(rows=rows, tau=p.tau, lambda1=p.lambda1, lambda2=p.lambda2)
    return payload, code


def cmd_critical(args):
    qs = [float(complex(q).real) for q in parse_vector(args.q)]
    rows = [{"q": q, "analytic": selberg.critical_mellin(q)} for q in qs]
    checks = []
    if args.mc:
        analytic = {q: selberg.critical_mellin(q) for q in qs}
        checks = _mc_checks("critical", "critical law, MC vs Barnes G ratio",
                            lambda gen, m: selberg.critical_sample(gen, m), analytic, args.mc, args.seed)
    payload, code = _check_payload(checks)
    payload["rows"] = rows
    return payload, code


def cmd_xi(args):
    rows = []
    for s in parse_vector(args.eval):
        rows.append({"s": _jsonable(s), "xi": _jsonable(xi.xi(s))})
    for tv in parse_vector(args.theta):
        row = {"t": float(complex(tv).real), "theta": xi.theta(float(complex(tv).real))}
        if args.M:
            row["theta_M"] = xi.theta(row["t"], args.M)
        rows.append(row)
    checks = []
    if args.funceq:
        for q in (1, 2):
            if args.mc:
                r = xi.t_delta_functional_residual(q, args.delta, n=args.mc, seed=args.seed)
                checks.append(Check(f"xi.t_delta_funceq.q{q}", "T(delta) functional equation (MC)",
                                    r.params_echo["lhs"], r.params_echo["rhs"], r.residual, 3.0))
            else:
                r = xi.t_delta_functional_residual(q, args.delta, method="exact")
                checks.append(_report_check(f"xi.t_delta_funceq.q{q}", "T(delta) functional equation", r, 1e-8))
    if args.delta_limit:
        deltas = (0.2, 0.1, 0.05)
        means, errs = [], []
        for k, d in enumerate(deltas):
            p = xi.TDeltaParams(d)
            if args.mc:
                s = xi.t_delta_statistic(p, 1, RngStream(args.seed, k), args.mc)
                means.append(s.mean)
                errs.append(s.stderr)
            else:
                m = xi.t_delta_moments(p, 1)
                means.append(m[1] - 1.0 / d)
                errs.append(1.0)  # exact values: equal weights
            rows.append({"delta": d, "lhs": means[-1], "stderr": errs[-1] if args.mc else 0.0,
                         "rhs": xi.t_delta_rhs(1, d)})
        c0, e0 = xi.delta_limit_extrapolation(means, errs, deltas)
        limit = (2.0 / math.pi) * 2.0 * xi.xi(2.0)
        checks.append(Check("xi.delta_limit.q1", "delta -> 0 limit of the T(delta) functional equation",
                            c0, limit, abs(c0 - limit) / max(e0, 1e-12) if args.mc else abs(c0 - limit),
                            3.0 if args.mc else 1e-3))
    payload, code = _check_payload(checks)
    payload["rows"] = rows
    return payload, code


def cmd_report(args):
    checks = []
    for name in SUITES:
        checks.extend(SUITE_FUNCS[name](args.tol))
    if args.mc:
        p = selberg.SelbergParams(1.5)
        checks += _mc_checks("selberg", "Selberg law, MC vs moment formula",
                             lambda gen, m: selberg.selberg_sample(p, gen, m),
                             {-1.0: selberg.selberg_moment(p, 1, -1)}, args.mc, args.seed)
        checks += _mc_checks("critical", "critical law, MC vs moment formula",
                             lambda gen, m: selberg.critical_sample(gen, m),
                             {-1.0: 24.0}, args.mc, args.seed)
    return _check_payload(checks)


# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _add_output(p):
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--deterministic", action="store_true", help="omit the timestamp")


def _add_beta(p):
    p.add_argument("--M", type=int, default=None, help="number of periods (checked against --a)")
    p.add_argument("--N", type=int, default=None, help="number of b entries (checked against --b)")
    p.add_argument("--a", default="", help="comma-separated periods")
    p.add_argument("--b0", type=float, default=1.0)
    p.add_argument("--b", default="", help="comma-separated b entries")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="barnesbeta", description="Barnes multiple gamma functions and Barnes beta laws.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gamma", help="evaluate L_M, Gamma_M or Barnes G")
    p.add_argument("--a", default="1", help="comma-separated periods")
    p.add_argument("--w", required=True, help="comma-separated arguments (complex as 1+2i)")
    p.add_argument("--kind", choices=("log", "gamma", "G"), default="log")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("eta", help="Mellin transform of a Barnes beta law")
    _add_beta(p)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("moments", help="integer moments in units of a_i")
    _add_beta(p)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--i", type=int, default=0)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("mass", help="atom at 1 for M < N")
    _add_beta(p)
    p.add_argument("--method", choices=("quadrature", "sn_formula", "product", "all"), default="all")
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("sample", help="draw variates; optional CSV dump")
    _add_beta(p)
    p.add_argument("--law", default="beta",
                   choices=("beta", "selberg", "critical", "t_delta") + sampling.ELEMENTARY)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--K", type=int, default=200)
    p.add_argument("--tau", type=float, default=1.5)
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--dump", default=None, help="CSV file for the draws")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run identity suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--tol", type=float, default=None, help="override every threshold")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selberg", help="Selberg law: Mellin table, optional MC")
    p.add_argument("--tau", type=float, default=1.5)
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--q", default="-2,-1,0.5,1")
    p.add_argument("--mc", type=int, default=0, help="number of MC draws (0 = none)")
    p.set_defaults(func=cmd_selberg)

    p = sub.add_parser("critical", help="critical law: Mellin table, optional MC")
    p.add_argument("--q", default="-2,-1,-0.5,0.5")
    p.add_argument("--mc", type=int, default=0)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("xi", help="xi, theta and the T(delta) functional equation")
    p.add_argument("--eval", default="", help="comma-separated arguments of xi")
    p.add_argument("--theta", default="", help="comma-separated t for theta")
    p.add_argument("--M", type=int, default=0, help="also report theta_M")
    p.add_argument("--funceq", action="store_true")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--delta-limit", action="store_true", dest="delta_limit")
    p.add_argument("--mc", type=int, default=0)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("report", help="all suites plus optional MC checks")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--mc", type=int, default=0)
    p.set_defaults(func=cmd_report)

    for action in sub.choices.values():
        action.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
        if action.get_default("func") is not None:
            _add_output(action)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        payload, code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"barnesbeta: error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except AccuracyError as exc:
        sys.stderr.write(f"accuracy failure: {exc}\n")
        return EXIT_ACCURACY
    except BarnesBetaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    _emit(payload, args.format, args.output, args.deterministic)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
