"""Command-line front end writing certification tables as CSV and JSON lines.

    subordlab norms --family hermite --q 4 --n 1..60
    subordlab classify --model ou --bernstein '{"a":0,"b":0.5}' --t 1 --p 2 --q 4
    subordlab certify-all --out-dir results/

Every command writes ``<command>.csv`` and/or ``<command>.jsonl`` into the
output directory (``--out-dir``, else ``$SUBORDLAB_OUT_DIR``, else ``.``) and
prints a one-line summary.  Exit status: 0 when every row passes, 1 on a
certification failure, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import certify
from .bernstein import BernsteinFn, parse_bernstein
from .limits import (
    degeneration_certificate,
    limit_residual_gegenbauer_to_hermite,
    limit_residual_jacobi_to_laguerre,
)
from .measures import DEFAULT_TOL, Measure, gauss_rule
from .norm_bounds import (
    certify_hermite,
    certify_laguerre,
    fourier_coefficient,
    fourier_coefficient_quadrature,
    growth_rate,
    predicted_rate,
)
from .obstruction import (
    bilinear_test,
    classify_laguerre,
    classify_ou,
    multiplier_necessary_condition,
    obstruction_scan,
    rate_kappa,
)
from .orthopoly import PolyFamily
from .poincare import RateFunction, loglog_slope, power_rate, transform_super, transform_weak
from .subordination import heat_kernel, subordinated_multiplier, ultra_norm_estimate

OUT_DIR_ENV = "SUBORDLAB_OUT_DIR"
FOURIER_RTOL = 1e-10
KERNEL_TOL = 1e-8


class ConfigError(ValueError):
    """A flag combination that violates a hypothesis of the requested computation."""


@dataclass
class RunConfig:
    command: str
    out_dir: Path
    formats: tuple[str, ...]
    options: dict = field(default_factory=dict)

    def get(self, key: str, default=None):
        value = self.options.get(key)
        return default if value is None else value


@dataclass
class Table:
    rows: list[dict]
    passed: bool
    summary: str


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_range(text: str) -> list[int]:
    """``"1..60"`` (inclusive), ``"1,2,5"`` or ``"7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"range must be non-empty with entries >= 0: {text!r}")
    return out


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def bernstein_arg(text: str) -> BernsteinFn:
    try:
        return parse_bernstein(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad Bernstein function {text!r}: {exc}") from None


def family_from(name: str, alpha: float) -> PolyFamily:
    if name == "hermite":
        return PolyFamily.hermite()
    if name == "laguerre":
        return PolyFamily.laguerre(alpha)
    raise ConfigError(f"unknown family {name!r}")


def _require_exponents(p: float, q: float) -> None:
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise ConfigError(f"need 1 < p, q < inf, got p={p}, q={q}")


def _num(x) -> object:
    """Floats as repr strings for non-finite values so JSON stays valid."""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# ---------------------------------------------------------------------------
# commands


def run_norms(cfg: RunConfig) -> Table:
    fam_name = cfg.get("family")
    alpha = cfg.get("alpha", 0.0)
    rho = cfg.get("rho", 2.0)
    tol = cfg.get("tol")
    rows = []
    for q in cfg.get("q"):
        if q < 2:
            raise ConfigError(f"the norm sandwich needs q >= 2, got q={q}")
        for n in cfg.get("n"):
            if fam_name == "hermite":
                if n < 1:
                    raise ConfigError("the Hermite sandwich is stated for n >= 1")
                rep = certify_hermite(n, q, tol)
            else:
                if not rho > 1:
                    raise ConfigError(f"rho must be > 1, got {rho}")
                rep = certify_laguerre(n, alpha, q, rho, tol)
            rows.append({"family": fam_name, "alpha": alpha if fam_name == "laguerre" else "", **rep.row(),
                         "measured": float(rep.measured), "lower": float(rep.lower), "upper": float(rep.upper)})
    bad = sum(not r["pass"] for r in rows)
    return Table(rows, bad == 0, f"{len(rows)} rows, {bad} outside the sandwich")


def run_bounds(cfg: RunConfig) -> Table:
    kind = cfg.get("kind")
    fam = family_from(cfg.get("family"), cfg.get("alpha", 0.0))
    if kind == "fourier":
        rows = []
        for b in cfg.get("b"):
            if fam.kind.value == "laguerre" and not 0 < b < 1:
                raise ConfigError(f"the Laguerre Fourier identity needs 0 < b < 1, got b={b}")
            for n in cfg.get("n"):
                closed = float(fourier_coefficient(fam, n, b, cfg.get("normalized", False)))
                quad = fourier_coefficient_quadrature(fam, n, b, cfg.get("normalized", False))
                err = abs(closed / quad - 1)
                rows.append({"n": n, "b": b, "closed_form": closed, "quadrature": quad,
                             "rel_err": err, "pass": err < FOURIER_RTOL})
        bad = sum(not r["pass"] for r in rows)
        return Table(rows, bad == 0, f"{len(rows)} coefficients, {bad} above relative error {FOURIER_RTOL:g}")
    f, t, p, q = cfg.get("bernstein"), cfg.get("t"), cfg.get("p"), cfg.get("q")
    _require_exponents(p, q)
    if not q > 2:
        raise ConfigError(f"the eigenfunction lower bound is used with q > 2, got q={q}")
    rep = obstruction_scan(fam, f, t, p, q, cfg.get("n"), cfg.get("threshold"), cfg.get("tol"))
    rows = [{"n": n, "t": t, "p": p, "q": q, "bound_log": b.logmag, "bound": float(b),
             "running_max": m, "exceeds_threshold": b.logmag > math.log(rep.threshold)}
            for (n, b), m in zip(rep.per_n, rep.running_max)]
    expect = cfg.get("expect")
    passed = expect is None or rep.verdict.value == expect
    for r in rows:
        r["pass"] = passed
    return Table(rows, passed, f"verdict {rep.verdict.value}, fitted rate {rep.fitted_rate:.6g}"
                 + (f", expected {expect}" if expect else ""))


def run_rates(cfg: RunConfig) -> Table:
    fam = family_from(cfg.get("family"), cfg.get("alpha", 0.0))
    p, q = cfg.get("p"), cfg.get("q")
    if not 1 <= p <= q:
        raise ConfigError(f"need 1 <= p <= q, got p={p}, q={q}")
    if cfg.get("kind") == "kappa":
        fit = rate_kappa(fam, p, q, cfg.get("n"), cfg.get("tol"))
        target, passed = math.nan, True
    else:
        fit = growth_rate(fam, p, q, cfg.get("n"), cfg.get("tol"))
        target = predicted_rate(fam, p, q)
        rtol = cfg.get("rtol", 0.05 if fam.kind.value == "hermite" else 0.10)
        err = abs(fit.slope) if target == 0 else abs(fit.slope / target - 1)
        passed = err < rtol
    rows = [{"n": n, "p": p, "q": q, "log_ratio": lr, "slope": fit.slope, "predicted": target, "pass": passed}
            for n, lr in zip(fit.window, fit.log_ratios)]
    return Table(rows, passed, f"fitted slope {fit.slope:.6g}, predicted {target:.6g}")


def run_kernel(cfg: RunConfig) -> Table:
    a, b = cfg.get("alpha", 0.0), cfg.get("beta", 0.0)
    if a < -0.5 or b < -0.5:
        raise ConfigError(f"the heat kernel needs alpha, beta >= -1/2, got ({a}, {b})")
    pts = np.array(cfg.get("x"), dtype=float)
    if np.any(np.abs(pts) > 1):
        raise ConfigError("kernel points must lie in [-1, 1]")
    rule = gauss_rule(Measure.jacobi(a, b), cfg.get("nodes", 400))
    rows = []
    for s in cfg.get("s"):
        ev = heat_kernel(a, b, s, pts, pts)
        mass = heat_kernel(a, b, s, pts, rule.nodes).value @ rule.weights
        half_l = heat_kernel(a, b, s / 2, pts, rule.nodes).value
        half_r = heat_kernel(a, b, s / 2, rule.nodes, pts).value
        semi = (half_l * rule.weights) @ half_r
        scale = max(1.0, float(np.max(np.abs(ev.value))))
        mass_err = float(np.max(np.abs(mass - 1)))
        sym_err = float(np.max(np.abs(ev.value - ev.value.T)))
        semi_err = float(np.max(np.abs(semi - ev.value))) / scale
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                rows.append({"s": s, "x": float(x), "y": float(y), "kernel": float(ev.value[i, j]),
                             "truncation": ev.truncation, "tail_bound": ev.tail_bound,
                             "mass_err": mass_err, "symmetry_err": sym_err, "semigroup_err": semi_err,
                             "pass": mass_err < KERNEL_TOL and sym_err == 0 and semi_err < KERNEL_TOL})
    bad = sum(not r["pass"] for r in rows)
    return Table(rows, bad == 0, f"{len(rows)} kernel values, {bad} failing mass/symmetry/semigroup checks")


def run_ultra(cfg: RunConfig) -> Table:
    a, b = cfg.get("alpha", 0.0), cfg.get("beta", 0.0)
    if a < -0.5 or b < -0.5:
        raise ConfigError(f"ultracontractive scaling needs alpha, beta >= -1/2, got ({a}, {b})")
    m = max(a, b) + 1
    rows = []
    for s in cfg.get("s"):
        est = ultra_norm_estimate(a, b, s, cfg.get("grid", 65))
        rows.append({"s": s, "estimate": est.value, "scaled": min(1.0, s) ** m * est.value,
                     "argmax_x": est.argmax[0], "argmax_y": est.argmax[1], "truncation": est.truncation})
    scaled = [r["scaled"] for r in rows]
    spread = max(scaled) / min(scaled)
    passed = spread < cfg.get("factor", 10.0)
    for r in rows:
        r["pass"] = passed
    return Table(rows, passed, f"scaled spread {spread:.4g} (exponent {m:g})")


def run_classify(cfg: RunConfig) -> Table:
    f, model = cfg.get("bernstein"), cfg.get("model")
    rows = []
    for t in cfg.get("t"):
        for p in cfg.get("p"):
            for q in cfg.get("q"):
                _require_exponents(p, q)
                if not t > 0:
                    raise ConfigError(f"t must be > 0, got {t}")
                cls = classify_ou(f, t, p, q) if model == "ou" else classify_laguerre(f, t, p, q, cfg.get("alpha", 0.0))
                expect = cfg.get("expect")
                rows.append({"model": model, "f": f.label(), "t": t, "p": p, "q": q, "verdict": cls.verdict,
                             "threshold": cls.threshold, "norm": cls.norm, "discriminant": cls.discriminant,
                             "pass": expect is None or cls.verdict == expect})
    bad = sum(not r["pass"] for r in rows)
    verdicts = sorted({r["verdict"] for r in rows})
    return Table(rows, bad == 0, f"{len(rows)} cases, verdicts {verdicts}" + (f", {bad} unexpected" if bad else ""))


def run_bilinear(cfg: RunConfig) -> Table:
    f, t, p, q = cfg.get("bernstein"), cfg.get("t"), cfg.get("p"), cfg.get("q")
    _require_exponents(p, q)
    rep = bilinear_test(f, t, p, q, cfg.get("threshold"), cfg.get("tau2_max"))
    passed = rep.verdict.value != "inconclusive"
    rows = [{"tau1": rep.k_star * v, "tau2": v, "log_value": lv, "k_star": rep.k_star,
             "quad_form_min": rep.quad_form_min, "verdict": rep.verdict.value, "pass": passed}
            for v, lv in zip(rep.tau2, rep.log_values)]
    return Table(rows, passed, f"verdict {rep.verdict.value}, Q(k*)={rep.quad_form_min:.6g}, "
                 f"fitted tau2^2 coefficient {rep.slope_measured:.6g}")


def run_parseval(cfg: RunConfig) -> Table:
    f, t, p, q = cfg.get("bernstein"), cfg.get("t"), cfg.get("p"), cfg.get("q")
    _require_exponents(p, q)
    alpha = cfg.get("alpha", 0.0)
    seq = subordinated_multiplier(f, t, PolyFamily.laguerre(alpha))
    rep = multiplier_necessary_condition(seq, p, q, cfg.get("n_max"), alpha)
    expect = cfg.get("expect") or ("violated" if q > p else None)
    passed = expect is None or rep.violated == (expect == "violated")
    rows = [{"n": n, "rho": r, "rho_limit": rep.rho_limit, "root_threshold": rep.threshold,
             "first_violation": rep.first_violation if rep.first_violation is not None else "",
             "violated": rep.violated, "pass": passed}
            for n, r in zip(rep.rho_degrees, rep.rho_values)]
    return Table(rows, passed, f"violated={rep.violated}, first violation n={rep.first_violation}, "
                 f"rho constant {rep.rho_constant:.4g}")


def _parse_rate(text: str, kind: str) -> RateFunction:
    name, _, args = text.partition(":")
    if name != "power" or not args:
        raise ConfigError(f"rate must look like power:m or power:m:c, got {text!r}")
    vals = [float(v) for v in args.split(":")]
    if not vals[0] > 0 or (len(vals) > 1 and not vals[1] > 0):
        raise ConfigError("power rates need m > 0 and c > 0")
    return power_rate(vals[0], vals[1] if len(vals) > 1 else 1.0, kind)


def run_poincare(cfg: RunConfig) -> Table:
    f, kind = cfg.get("bernstein"), cfg.get("kind")
    base = _parse_rate(cfg.get("rate"), kind)
    transformed = transform_super(base, f) if kind == "super" else transform_weak(base, f)
    r = np.geomspace(cfg.get("r_min"), cfg.get("r_max"), cfg.get("points"))
    values = transformed(r)
    is_sqrt = f.to_dict() == BernsteinFn.sqrt().to_dict()
    if is_sqrt:
        special = 4 * base(r**2 / 8) if kind == "super" else 2 * np.sqrt(2 * base(r / 4))
    else:
        special = np.full_like(r, np.nan)
    rows = []
    for ri, v, sp in zip(r, values, special):
        ok = bool(abs(v / sp - 1) < 1e-13) if is_sqrt else bool(v > 0)
        rows.append({"r": float(ri), "base_rate": float(base(ri)), "transformed": float(v),
                     "sqrt_specialization": float(sp), "pass": ok})
    finite = np.isfinite(values)
    slope = loglog_slope(transformed, r[finite].min(), r[finite].max()) if finite.sum() > 2 else math.nan
    bad = sum(not row["pass"] for row in rows)
    return Table(rows, bad == 0, f"{len(rows)} samples, log-log slope {slope:.6g}, {bad} failing")


def run_limits(cfg: RunConfig) -> Table:
    kind = cfg.get("kind")
    if kind == "certificate":
        p, q, M = cfg.get("p"), cfg.get("q"), cfg.get("M")
        _require_exponents(p, q)
        if not q > 2:
            raise ConfigError(f"the degeneration certificate needs q > 2, got q={q}")
        cert = degeneration_certificate(cfg.get("alpha", 0.0), cfg.get("t"), p, q, M)
        rows = [{"n": cert.n, "beta": beta, "bound": bound, "target": cert.target,
                 "limit_value": cert.limit_value, "pass": bound > cert.target}
                for beta, bound in cert.searched]
        return Table(rows, cert.found, f"found={cert.found}, n={cert.n}, beta0={cert.beta0:g}, bound {cert.bound:.6g}")
    scales = cfg.get("scales")
    rows = []
    all_ok = True
    for n in cfg.get("n"):
        for x in cfg.get("x"):
            if kind == "jacobi-laguerre":
                res = [limit_residual_jacobi_to_laguerre(n, cfg.get("alpha", 0.0), s, x) for s in scales]
            else:
                res = [limit_residual_gegenbauer_to_hermite(n, s, x) for s in scales]
            # degrees whose residual is pure rounding are exempt from monotonicity
            exact = max(res) < 1e-13
            monotone = exact or all(b < a for a, b in zip(res, res[1:]))
            all_ok &= monotone
            for s, r in zip(scales, res):
                rows.append({"n": n, "x": x, "scale": s, "residual": r, "monotone": monotone, "pass": monotone})
    return Table(rows, all_ok, f"{len(rows)} residuals, monotone along ladder: {all_ok}")


def run_certify_all(cfg: RunConfig) -> Table:
    results = []
    for check in certify.CRITERIA:
        res = check()
        print(res.line(), flush=True)
        results.append(res)
    rows = [r.row() for r in results]
    passed = sum(r.passed for r in results)
    return Table(rows, passed == len(results), f"{passed}/{len(results)} criteria pass")


COMMANDS: dict[str, Callable[[RunConfig], Table]] = {
    "norms": run_norms,
    "bounds": run_bounds,
    "rates": run_rates,
    "kernel": run_kernel,
    "ultra": run_ultra,
    "classify": run_classify,
    "bilinear": run_bilinear,
    "parseval": run_parseval,
    "poincare": run_poincare,
    "limits": run_limits,
    "certify-all": run_certify_all,
}


# ---------------------------------------------------------------------------
# output


def write_tables(table: Table, cfg: RunConfig) -> list[Path]:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    rows = [{k: _num(v) for k, v in row.items()} for row in table.rows]
    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    written = []
    if "csv" in cfg.formats:
        path = cfg.out_dir / f"{cfg.command}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=columns)
            writer.writeheader()
            writer.writerows(rows)
        written.append(path)
    if "json" in cfg.formats:
        path = cfg.out_dir / f"{cfg.command}.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, allow_nan=False) + "\n")
        written.append(path)
    return written


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=None, help=f"output directory (default ${OUT_DIR_ENV} or .)")
    common.add_argument("--format", choices=("csv", "json", "both"), default="both")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="quadrature tolerance")

    parser = argparse.ArgumentParser(prog="subordlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    def family_flags(sp, default_n: str):
        sp.add_argument("--family", choices=("hermite", "laguerre"), default="hermite")
        sp.add_argument("--alpha", type=float, default=0.0)
        sp.add_argument("--n", type=parse_range, default=parse_range(default_n))

    def semigroup_flags(sp, q_default: float = 4.0):
        sp.add_argument("--bernstein", type=bernstein_arg, default=BernsteinFn.sqrt())
        sp.add_argument("--t", type=float, default=1.0)
        sp.add_argument("--p", type=float, default=2.0)
        sp.add_argument("--q", type=float, default=q_default)

    sp = add("norms", "eigenfunction L^q norms against explicit two-sided bounds")
    family_flags(sp, "1..60")
    sp.add_argument("--q", type=parse_floats, default=[4.0])
    sp.add_argument("--rho", type=float, default=2.0, help="Laguerre lower-bound parameter")

    sp = add("bounds", "Fourier coefficients or eigenfunction lower bounds")
    sp.add_argument("--kind", choices=("fourier", "lower"), default="lower")
    family_flags(sp, "0..30")
    semigroup_flags(sp)
    sp.add_argument("--b", type=parse_floats, default=[0.5])
    sp.add_argument("--normalized", action="store_true")
    sp.add_argument("--threshold", type=float, default=1e6)
    sp.add_argument("--expect", choices=("diverging", "bounded-window", "inconclusive"))

    sp = add("rates", "growth rate of norm ratios over a degree window")
    sp.add_argument("--kind", choices=("growth", "kappa"), default="growth")
    family_flags(sp, "30..60")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--q", type=float, default=4.0)
    sp.add_argument("--rtol", type=float, default=None)

    sp = add("kernel", "Jacobi heat kernel values with mass, symmetry and semigroup checks")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--s", type=parse_floats, default=[0.1, 1.0])
    sp.add_argument("--x", type=parse_floats, default=[-1.0, -0.5, 0.0, 0.5, 1.0])
    sp.add_argument("--nodes", type=int, default=400)

    sp = add("ultra", "scaled L^1 -> L^inf estimates of the Jacobi heat semigroup")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--s", type=parse_floats, default=[1e-3, 1e-2, 1e-1, 1.0])
    sp.add_argument("--grid", type=int, default=65)
    sp.add_argument("--factor", type=float, default=10.0)

    sp = add("classify", "bounded / blow-up case split for subordinated OU and Laguerre semigroups")
    sp.add_argument("--model", choices=("ou", "laguerre"), default="ou")
    sp.add_argument("--bernstein", type=bernstein_arg, default=BernsteinFn.sqrt())
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--t", type=parse_floats, default=[1.0])
    sp.add_argument("--p", type=parse_floats, default=[2.0])
    sp.add_argument("--q", type=parse_floats, default=[4.0])
    sp.add_argument("--expect", choices=("bounded", "blow-up", "outside-hypotheses"))

    sp = add("bilinear", "Gaussian test-function ratio along the vertex ray")
    semigroup_flags(sp)
    sp.add_argument("--threshold", type=float, default=1e6)
    sp.add_argument("--tau2-max", type=float, default=1e3)

    sp = add("parseval", "Laguerre multiplier necessary condition and the rho sequence")
    semigroup_flags(sp)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--n-max", type=int, default=100000)
    sp.add_argument("--expect", choices=("violated", "satisfied"))

    sp = add("poincare", "transformed super/weak Poincare rates")
    sp.add_argument("--bernstein", type=bernstein_arg, default=BernsteinFn.sqrt())
    sp.add_argument("--kind", choices=("super", "weak"), default="super")
    sp.add_argument("--rate", default="power:1", help="power:m or power:m:c, meaning c r^-m")
    sp.add_argument("--r-min", type=float, default=1e-3)
    sp.add_argument("--r-max", type=float, default=1e3)
    sp.add_argument("--points", type=int, default=61)

    sp = add("limits", "Jacobi -> Laguerre / Gegenbauer -> Hermite residuals or a degeneration certificate")
    sp.add_argument("--kind", choices=("jacobi-laguerre", "gegenbauer-hermite", "certificate"),
                    default="jacobi-laguerre")
    sp.add_argument("--n", type=parse_range, default=parse_range("0..8"))
    sp.add_argument("--x", type=parse_floats, default=[1.0])
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--scales", type=parse_floats, default=[1e2, 1e3, 1e4, 1e5])
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--q", type=float, default=4.0)
    sp.add_argument("--M", type=float, default=10.0)

    add("certify-all", "run the full certification suite")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    out = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    formats = ("csv", "json") if args.format == "both" else (args.format,)
    skip = {"command", "out_dir", "format"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(args.command, Path(out), formats, options)


def run(cfg: RunConfig) -> int:
    try:
        table = COMMANDS[cfg.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    paths = write_tables(table, cfg)
    status = "PASS" if table.passed else "FAIL"
    print(f"{cfg.command}: {status} ({table.summary}) -> {', '.join(str(p) for p in paths)}")
    if not table.passed:
        for row in table.rows:
            if not row.get("pass", True):
                print("  failing row: " + json.dumps({k: _num(v) for k, v in row.items()}), file=sys.stderr)
    return 0 if table.passed else 1


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2, --help with 0
        return exc.code if isinstance(exc.code, int) else 2
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
