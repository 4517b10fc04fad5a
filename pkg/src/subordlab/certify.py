"""The twelve end-to-end certification checks.

Each check returns a :class:`CriterionResult`; :data:`CRITERIA` lists them in
order.  They are run by ``subordlab certify-all`` and by the acceptance tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bernstein import BernsteinFn
from .limits import (
    degeneration_certificate,
    limit_residual_gegenbauer_to_hermite,
    limit_residual_jacobi_to_laguerre,
    rescaled_lower_bound,
)
from .measures import Measure, gauss_rule
from .norm_bounds import (
    certify_hermite,
    fourier_coefficient,
    fourier_coefficient_quadrature,
    growth_rate,
    predicted_rate,
)
from .obstruction import (
    F_slope,
    F_t,
    bilinear_test,
    bilinear_value,
    classify_laguerre,
    classify_ou,
    multiplier_necessary_condition,
    obstruction_scan,
)
from .orthopoly import PolyFamily
from .poincare import loglog_slope, power_rate, transform_super, transform_weak
from .subordination import heat_kernel, poisson_kernel_identity, subordinated_multiplier, ultra_norm_estimate


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"

    def row(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": self.passed, "detail": self.detail}


def hermite_sandwich() -> CriterionResult:
    failures = []
    worst_gap = math.inf
    for q in (3.0, 4.0, 6.0):
        for n in range(1, 61):
            rep = certify_hermite(n, q)
            worst_gap = min(worst_gap, rep.measured.logmag - rep.lower.logmag, rep.upper.logmag - rep.measured.logmag)
            if not rep.passed:
                failures.append((n, q))
    return CriterionResult(1, "Hermite sandwich", not failures,
                           f"180 (n, q) pairs, failures={failures[:5]}, smallest log gap {worst_gap:.3g}")


def rate_limits() -> CriterionResult:
    her = growth_rate(PolyFamily.hermite(), 2.0, 4.0, range(30, 61))
    lag = growth_rate(PolyFamily.laguerre(0.0), 2.0, 4.0, range(20, 41))
    her_err = abs(her.slope / predicted_rate(PolyFamily.hermite(), 2, 4) - 1)
    lag_err = abs(lag.slope / predicted_rate(PolyFamily.laguerre(0), 2, 4) - 1)
    return CriterionResult(2, "rate limits", her_err < 0.05 and lag_err < 0.10,
                           f"Hermite slope {her.slope:.5f} (rel err {her_err:.3%}), "
                           f"Laguerre slope {lag.slope:.5f} (rel err {lag_err:.3%})")


def fourier_identities() -> CriterionResult:
    worst = 0.0
    cases = 0
    for n in range(31):
        for b in (0.1, 0.5, 1.0, 3.0):
            closed = float(fourier_coefficient(PolyFamily.hermite(), n, b))
            quad = fourier_coefficient_quadrature(PolyFamily.hermite(), n, b)
            worst = max(worst, abs(closed / quad - 1))
            cases += 1
        for alpha in (0.0, 0.5):
            for b in (0.1, 0.5, 0.9):
                for normalized in (False, True):
                    fam = PolyFamily.laguerre(alpha)
                    closed = float(fourier_coefficient(fam, n, b, normalized))
                    quad = fourier_coefficient_quadrature(fam, n, b, normalized)
                    worst = max(worst, abs(closed / quad - 1))
                    cases += 1
    return CriterionResult(3, "Fourier identities", worst < 1e-10, f"{cases} cases, worst relative error {worst:.2e}")


def poisson_kernel() -> CriterionResult:
    grid = (0.25, 0.5, 1.0, 2.0, 4.0)
    worst = max(poisson_kernel_identity(t, lam) for t in grid for lam in grid)
    return CriterionResult(4, "Poisson kernel identity", worst < 1e-8, f"max residual {worst:.2e} on 5x5 grid")


def blow_up_certificate() -> CriterionResult:
    rep = obstruction_scan(PolyFamily.hermite(), BernsteinFn.sqrt(), 1.0, 2.0, 4.0, range(0, 61))
    n3, n6 = rep.first_exceeding(1e3), rep.first_exceeding(1e6)
    ok = n3 is not None and n3 <= 30 and n6 is not None and n6 <= 60
    return CriterionResult(5, "blow-up certificate", ok,
                           f"bound > 1e3 first at n={n3}, > 1e6 first at n={n6}, max {rep.best[1].log10():.2f} decades")


def classification_grid() -> list[tuple[str, float, float, float, float, bool]]:
    """(model, p, q, b, t, expected blow-up) with boundary cases built in."""
    pts = [
        ("ou", 2.0, 2.0, 0.5, 1.0, False),
        ("ou", 2.0, 4.0, 0.5, 1.0, True),
        ("ou", 2.0, 3.5, 0.5, 1.0, False),
        ("ou", 2.0, 4.0, 0.5, math.log(3), False),  # boundary: 1 + e^{2bt} = 4
        ("ou", 1.5, 3.0, 0.0, 1.0, True),
        ("ou", 3.0, 5.0, 0.0, 0.3, True),
        ("ou", 1.2, 1.3, 1.0, 0.01, True),
        ("ou", 1.2, 1.3, 1.0, 0.5, False),
        ("ou", 3.0, 1 + 2 * math.e, 0.25, 2.0, False),  # boundary
        ("ou", 4.0, 10.0, 0.2, 1.0, True),
        ("laguerre", 2.0, 4.0, 1.0, math.log(3), False),  # boundary
        ("laguerre", 2.0, 4.0, 1.0, 1.0, True),
        ("laguerre", 2.0, 3.0, 2.0, 1.0, False),
        ("laguerre", 1.5, 2.5, 0.0, 1.0, True),
        ("laguerre", 3.0, 7.0, 0.0, 5.0, True),
        ("laguerre", 2.0, 1 + math.e, 1.0, 1.0, False),  # boundary
        ("laguerre", 1.1, 5.0, 4.0, 1.0, False),
        ("laguerre", 1.1, 5.0, 3.0, 0.2, True),
        ("laguerre", 5.0, 4.0, 0.0, 1.0, False),
        ("laguerre", 2.0, 2.4, 0.4, 1.0, False),
    ]
    return pts


def classification_thresholds() -> CriterionResult:
    mismatches = []
    for model, p, q, b, t, expected in classification_grid():
        f = BernsteinFn(a=0.3, b=b, levy=BernsteinFn.sqrt().levy)
        cls = classify_ou(f, t, p, q) if model == "ou" else classify_laguerre(f, t, p, q)
        norm_ok = cls.blows_up or math.isclose(cls.norm, math.exp(-0.3 * t), rel_tol=1e-15)
        # independent comparison in logs, away from the boundary where rounding decides
        rate = 2 * b * t if model == "ou" else b * t
        gap = math.log(q - 1) - math.log(p - 1) - rate if q > 1 else -math.inf
        independent_ok = abs(gap) < 1e-9 or (gap > 0) == expected
        if cls.blows_up != expected or not norm_ok or not independent_ok:
            mismatches.append((model, p, q, b, t))
    return CriterionResult(6, "classification thresholds", not mismatches,
                           f"{len(classification_grid())} grid points, mismatches={mismatches}")


def bilinear_divergence() -> CriterionResult:
    f = BernsteinFn.drift(0.5)
    blow = bilinear_test(f, 1.0, 2.0, 4.0, threshold=1e6, tau2_max=1e3)
    taus = np.geomspace(0.01, 100.0, 15)
    bounded_max = max(bilinear_value(f, 1.0, 2.0, 3.0, t1, t2).logmag for t1 in taus for t2 in taus)
    ray = bilinear_test(f, 1.0, 2.0, 3.0, tau2_max=1e3)
    bounded_max = max(bounded_max, ray.max_log_value)
    ok = blow.verdict.value == "blow-up-certified" and bounded_max <= math.log1p(1e-6)
    return CriterionResult(7, "bilinear divergence", ok,
                           f"q=4: verdict {blow.verdict.value}, max log ratio {blow.max_log_value:.4g}; "
                           f"q=3: max ratio {math.exp(bounded_max):.9f}")


def f_slope() -> CriterionResult:
    errs = []
    for t in (0.5, 1.0):
        errs.append(abs(F_t(BernsteinFn.drift(1.0), t, 400.0).logmag / 400.0 / math.exp(-t) - 1))
    sqrt_slope = F_slope(BernsteinFn.sqrt(), 1.0)
    ok = max(errs) < 0.01 and abs(sqrt_slope - 1) < 0.05
    return CriterionResult(8, "F_t slope", ok,
                           f"drift rel errs {errs[0]:.2e}, {errs[1]:.2e}; sqrt extrapolated slope {sqrt_slope:.5f}")


def jacobi_ultracontractivity() -> CriterionResult:
    spreads = {}
    for a, b in ((0.0, 0.0), (0.5, -0.5), (1.0, 1.0)):
        m = max(a, b) + 1
        scaled = [min(1.0, s) ** m * ultra_norm_estimate(a, b, s).value for s in (1e-3, 1e-2, 1e-1, 1.0)]
        spreads[(a, b)] = max(scaled) / min(scaled)
    mass_err = sym_err = semi_err = 0.0
    for a, b in ((0.0, 0.0), (0.5, -0.5), (1.0, 1.0)):
        rule = gauss_rule(Measure.jacobi(a, b), 400)
        for s in (0.1, 1.0):
            kern = heat_kernel(a, b, s, np.array([-0.9, 0.0, 0.9]), rule.nodes).value
            mass_err = max(mass_err, float(np.max(np.abs(kern @ rule.weights - 1))))
        pts = np.array([-1.0, -0.4, 0.3, 0.95])
        kern = heat_kernel(a, b, 0.05, pts, pts).value
        sym_err = max(sym_err, float(np.max(np.abs(kern - kern.T))))
        left = heat_kernel(a, b, 0.1, pts, rule.nodes).value
        right = heat_kernel(a, b, 0.2, rule.nodes, pts).value
        direct = heat_kernel(a, b, 0.3, pts, pts).value
        semi_err = max(semi_err, float(np.max(np.abs((left * rule.weights) @ right - direct))))
    ok = max(spreads.values()) < 10 and mass_err < 1e-8 and sym_err == 0 and semi_err < 1e-7
    spread_txt = ", ".join(f"{k}: {v:.3f}" for k, v in spreads.items())
    return CriterionResult(9, "Jacobi ultracontractive scaling", ok,
                           f"spreads {spread_txt}; mass err {mass_err:.1e}, symmetry err {sym_err:.1e}, "
                           f"semigroup err {semi_err:.1e}")


def poincare_algebra() -> CriterionResult:
    rng = np.random.default_rng(0)
    r = 10.0 ** rng.uniform(-4, 4, 1000)
    sqrt = BernsteinFn.sqrt()
    beta = power_rate(1.7, 2.0)
    alpha = power_rate(0.8, 3.0, kind="weak")
    super_err = float(np.max(np.abs(transform_super(beta, sqrt)(r) / (4 * beta(r**2 / 8)) - 1)))
    weak_err = float(np.max(np.abs(transform_weak(alpha, sqrt)(r) / (2 * np.sqrt(2 * alpha(r / 4))) - 1)))
    slope_err = 0.0
    for m in (0.5, 1.0, 2.5):
        for theta in (0.25, 0.5, 0.75, 1.0):
            f = BernsteinFn.drift(1.0) if theta == 1.0 else BernsteinFn.stable(theta)
            slope = loglog_slope(transform_super(power_rate(m), f), 1e-6, 1e-2)
            slope_err = max(slope_err, abs(slope + m / theta))
    ok = super_err < 1e-14 and weak_err < 1e-14 and slope_err < 0.01
    return CriterionResult(10, "Poincare algebra", ok,
                           f"super identity err {super_err:.1e}, weak identity err {weak_err:.1e}, "
                           f"exponent err {slope_err:.1e}")


def limit_transitions() -> CriterionResult:
    ladder = (1e2, 1e3, 1e4, 1e5)
    monotone = True
    small = True
    for n in range(0, 9):
        for alpha, x in ((0.0, 1.0), (0.5, 2.0)):
            res = [limit_residual_jacobi_to_laguerre(n, alpha, s, x) for s in ladder]
            monotone &= n == 0 or all(b < a for a, b in zip(res, res[1:]))
            small &= res[2] < 1e-2
        for x in (0.7, -1.3):
            res = [limit_residual_gegenbauer_to_hermite(n, s, x) for s in ladder]
            # n <= 1 is exact up to rounding
            monotone &= n <= 1 or all(b < a for a, b in zip(res, res[1:]))
            small &= res[2] < 1e-2
    cert = degeneration_certificate(0.0, 1.0, 2.0, 4.0, 10.0)
    recomputed = float(rescaled_lower_bound(0.0, cert.beta0, 1.0, 2.0, 4.0, cert.n)) if cert.found else math.nan
    ok = monotone and small and cert.found and recomputed > 20.0
    return CriterionResult(11, "limit transitions", ok,
                           f"monotone={monotone}, below 1e-2 at 1e4={small}; certificate n={cert.n}, "
                           f"beta0={cert.beta0:g}, recomputed bound {recomputed:.4g} > 20")


def laguerre_necessary_condition() -> CriterionResult:
    grid = [(1.5, 2.0), (2.0, 3.0), (2.0, 4.0), (3.0, 3.5), (1.2, 1.3), (4.0, 8.0), (1.1, 20.0)]
    missed = []
    for p, q in grid:
        seq = subordinated_multiplier(BernsteinFn.sqrt(), 1.0, PolyFamily.laguerre(0.0))
        rep = multiplier_necessary_condition(seq, p, q, n_max=100000)
        if not rep.violated:
            missed.append((p, q))
    return CriterionResult(12, "Laguerre necessary condition", not missed,
                           f"{len(grid)} (p, q) pairs, undetected={missed}")


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    hermite_sandwich,
    rate_limits,
    fourier_identities,
    poisson_kernel,
    blow_up_certificate,
    classification_thresholds,
    bilinear_divergence,
    f_slope,
    jacobi_ultracontractivity,
    poincare_algebra,
    limit_transitions,
    laguerre_necessary_condition,
)


def run_all() -> list[CriterionResult]:
    return [check() for check in CRITERIA]


__all__ = ["CriterionResult", "CRITERIA", "run_all", "classification_grid"]
