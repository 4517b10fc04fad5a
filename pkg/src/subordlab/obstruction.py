"""Lower bounds for ``||S_t^f||_{p->q}``.

Two kinds of test functions are used.  Eigenfunctions give
``||S_t^f||_{p->q} >= exp(-t f(lam_n)) ||phi_n||_q / ||phi_n||_p``.  The
exponentials ``g_tau(x) = exp(tau x)`` give closed-form bilinear values
through the series ``F_t``.  Case splits for the drift part of f and the
Laguerre Parseval necessary condition live here too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .bernstein import BernsteinFn
from .logvalue import ZERO, LogValue, logsumexp
from .measures import DEFAULT_TOL
from .norm_bounds import RateFit, check_window, norm_ratio
from .orthopoly import PolyFamily, eigenvalue
from .subordination import MultiplierSequence

BOUNDARY_RTOL = 1e-12
DEFAULT_THRESHOLD = 1e6
SLOPE_LADDER = (100.0, 200.0, 400.0)


def _check_exponents(p: float, q: float) -> None:
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise ValueError(f"need 1 < p, q < inf, got p={p}, q={q}")


def conjugate(r: float) -> float:
    return r / (r - 1)


# ---------------------------------------------------------------------------
# eigenfunction tests


def eigen_lower_bound(family: PolyFamily, f: BernsteinFn, t: float, p: float, q: float, n: int,
                      tol: float = DEFAULT_TOL) -> LogValue:
    """``exp(-t f(lam_n)) ||phi_n||_q / ||phi_n||_p``."""
    _check_exponents(p, q)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    damping = LogValue.from_log(-t * f(eigenvalue(family, n)))
    return damping * norm_ratio(family, n, p, q, tol)


class Verdict(str, Enum):
    DIVERGING = "diverging"
    BOUNDED_WINDOW = "bounded-window"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ObstructionReport:
    family: PolyFamily
    p: float
    q: float
    t: float
    f: BernsteinFn
    per_n: tuple[tuple[int, LogValue], ...]
    running_max: tuple[float, ...]
    verdict: Verdict
    fitted_rate: float
    threshold: float

    @property
    def best(self) -> tuple[int, LogValue]:
        return max(self.per_n, key=lambda item: item[1].logmag)

    def first_exceeding(self, level: float) -> Optional[int]:
        for n, bound in self.per_n:
            if bound.logmag > math.log(level):
                return n
        return None


def obstruction_scan(family: PolyFamily, f: BernsteinFn, t: float, p: float, q: float, degrees,
                     threshold: float = DEFAULT_THRESHOLD, tol: float = DEFAULT_TOL) -> ObstructionReport:
    """Eigenfunction lower bounds along ``degrees`` with an operational verdict.

    ``diverging`` means the running maximum passed ``threshold``;
    ``bounded-window`` means the bounds in the second half of the window
    never exceed the maximum of the first half.  ``fitted_rate`` is the
    least-squares slope of ``log(||phi_n||_q/||phi_n||_p)`` against
    ``f(lam_n)``, a finite-window stand-in for its limsup ratio.
    """
    degrees = sorted(set(int(n) for n in degrees))
    per_n = tuple((n, eigen_lower_bound(family, f, t, p, q, n, tol)) for n in degrees)
    logs = np.array([b.logmag for _, b in per_n])
    running = np.maximum.accumulate(logs)
    half = len(logs) // 2
    if running[-1] > math.log(threshold):
        verdict = Verdict.DIVERGING
    elif half and logs[half:].max() <= logs[:half].max():
        verdict = Verdict.BOUNDED_WINDOW
    else:
        verdict = Verdict.INCONCLUSIVE
    ratios = np.array([norm_ratio(family, n, p, q, tol).logmag for n in degrees])
    fvals = np.asarray(f(eigenvalue(family, np.array(degrees))), dtype=float)
    rate = float(np.polyfit(fvals, ratios, 1)[0]) if len(degrees) >= 2 and np.ptp(fvals) > 0 else math.nan
    return ObstructionReport(family, p, q, t, f, per_n, tuple(float(v) for v in np.exp(running)),
                             verdict, rate, threshold)


def rate_kappa(family: PolyFamily, p: float, q: float, n_window, tol: float = DEFAULT_TOL) -> RateFit:
    """Slope of ``log(||phi_n||_q/||phi_n||_p)`` against ``sqrt(lam_n)`` over a window."""
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    window = check_window(n_window)
    logs = np.array([norm_ratio(family, n, p, q, tol).logmag for n in window])
    roots = np.sqrt(eigenvalue(family, np.array(window)))
    slope, intercept = np.polyfit(roots, logs, 1)
    return RateFit(float(slope), float(intercept), window, tuple(float(v) for v in logs))


# ---------------------------------------------------------------------------
# the series F_t(z) = sum exp(-t f(n)) z^n / n!


def F_t(f: BernsteinFn, t: float, z: float, tol: float = 1e-16, chunk: int = 4096) -> LogValue:
    """``sum_n exp(-t f(n)) z^n / n!`` summed in log scale.

    Summation stops once the next term and the tail majorant
    ``exp(-t f(N+1)) z^(N+1)/(N+1)! / (1 - z/(N+2))`` (valid because f is
    nondecreasing) both fall below ``tol`` times the partial sum.
    """
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    if z == 0:
        return LogValue.from_log(-t * f(0.0))
    log_z = math.log(z)
    log_tol = math.log(tol)
    total = -math.inf
    start = 0
    while True:
        n = np.arange(start, start + chunk, dtype=float)
        log_terms = -t * np.asarray(f(n), dtype=float) + n * log_z - gammaln(n + 1)
        partial = np.logaddexp.accumulate(np.concatenate([[total], log_terms]))[1:]
        nxt = np.append(log_terms[1:], -t * f(n[-1] + 1) + (n[-1] + 1) * log_z - gammaln(n[-1] + 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            geometric = np.where(n + 2 > z, -np.log1p(-z / (n + 2)), np.inf)
        done = (nxt <= log_tol + partial) & (nxt + geometric <= log_tol + partial)
        hit = np.nonzero(done)[0]
        if hit.size:
            return LogValue.from_log(float(partial[hit[0]]))
        total = float(partial[-1])
        start += chunk


def F_slope(f: BernsteinFn, t: float, ladder=SLOPE_LADDER) -> float:
    """Leading coefficient A in ``log F_t(z) = A z + B sqrt(z) + C`` fitted on a z-ladder."""
    z = np.asarray(ladder, dtype=float)
    if z.size < 3:
        raise ValueError("slope extrapolation needs at least three ladder points")
    logs = np.array([F_t(f, t, float(v)).logmag for v in z])
    basis = np.column_stack([z, np.sqrt(z), np.ones_like(z)])
    coef, *_ = np.linalg.lstsq(basis, logs, rcond=None)
    return float(coef[0])


# ---------------------------------------------------------------------------
# bilinear exponential test on the Gaussian space


def bilinear_value(f: BernsteinFn, t: float, p: float, q: float, tau1: float, tau2: float) -> LogValue:
    """``<S_t^f g_tau1, g_tau2> / (||g_tau1||_p ||g_tau2||_q')`` on the Gaussian space."""
    _check_exponents(p, q)
    if not (tau1 > 0 and tau2 > 0):
        raise ValueError(f"tau1, tau2 must be > 0, got {tau1}, {tau2}")
    qc = conjugate(q)
    log_f = F_t(f, t, tau1 * tau2 / 2).logmag
    return LogValue.from_log(-0.25 * ((p - 1) * tau1**2 + (qc - 1) * tau2**2) + log_f)


def vertex_slope(b: float, t: float, p: float) -> float:
    """``k* = exp(-b t)/(p-1)``, minimizer of ``(p-1)k^2 - 2 exp(-bt) k + (q'-1)``."""
    return math.exp(-b * t) / (p - 1)


def quadratic_form(k: float, b: float, t: float, p: float, q: float) -> float:
    return (p - 1) * k * k - 2 * math.exp(-b * t) * k + (conjugate(q) - 1)


class BilinearVerdict(str, Enum):
    BLOW_UP = "blow-up-certified"
    BOUNDED = "bounded-regime"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BilinearReport:
    p: float
    q: float
    t: float
    f: BernsteinFn
    k_star: float
    quad_form_min: float
    slope_measured: float
    verdict: BilinearVerdict
    threshold: float
    tau2: tuple[float, ...]
    log_values: tuple[float, ...]

    @property
    def max_log_value(self) -> float:
        return max(self.log_values)


def bilinear_test(f: BernsteinFn, t: float, p: float, q: float, threshold: float = DEFAULT_THRESHOLD,
                  tau2_max: float = 1e3, points: int = 31) -> BilinearReport:
    """Evaluate the bilinear ratio along the ray ``tau1 = k* tau2``.

    ``slope_measured`` is the fitted coefficient of ``tau2^2`` in the log
    ratio over the upper half of the ladder; it approaches ``-Q(k*)/4``.
    """
    _check_exponents(p, q)
    k = vertex_slope(f.b, t, p)
    qmin = quadratic_form(k, f.b, t, p, q)
    tau2 = np.geomspace(1.0, tau2_max, points)
    logs = np.array([bilinear_value(f, t, p, q, k * v, v).logmag for v in tau2])
    upper = slice(points // 2, None)
    slope = float(np.polyfit(tau2[upper] ** 2, logs[upper], 1)[0])
    if qmin < 0 and logs.max() > math.log(threshold):
        verdict = BilinearVerdict.BLOW_UP
    elif qmin >= 0 and logs.max() <= math.log1p(1e-6):
        verdict = BilinearVerdict.BOUNDED
    else:
        verdict = BilinearVerdict.INCONCLUSIVE
    return BilinearReport(p, q, t, f, k, qmin, slope, verdict, threshold,
                          tuple(float(v) for v in tau2), tuple(float(v) for v in logs))


# ---------------------------------------------------------------------------
# exact case splits


@dataclass(frozen=True)
class Classification:
    model: str
    verdict: str  # "bounded" or "blow-up"; "outside-hypotheses" when no claim applies
    threshold: float
    norm: float
    discriminant: float

    @property
    def blows_up(self) -> bool:
        return self.verdict == "blow-up"


def _classify(model: str, f: BernsteinFn, t: float, p: float, q: float, growth: float,
              bounded_allowed: bool) -> Classification:
    if not 1 < p < math.inf or not 1 < q < math.inf:
        raise ValueError(f"need 1 < p, q < inf, got p={p}, q={q}")
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    threshold = 1 + (p - 1) * math.exp(growth * f.b * t)
    disc = math.exp(-growth * f.b * t) - (p - 1) / (q - 1)
    if q <= threshold * (1 + BOUNDARY_RTOL):
        if not bounded_allowed:
            return Classification(model, "outside-hypotheses", threshold, math.nan, disc)
        return Classification(model, "bounded", threshold, math.exp(-f.a * t), disc)
    if not disc > 0:
        raise ArithmeticError(f"blow-up branch with non-positive discriminant {disc}")
    return Classification(model, "blow-up", threshold, math.inf, disc)


def classify_ou(f: BernsteinFn, t: float, p: float, q: float) -> Classification:
    """Norm ``exp(-a t)`` iff ``q <= 1 + (p-1) exp(2 b t)``, otherwise infinite."""
    return _classify("ou", f, t, p, q, 2.0, True)


def classify_laguerre(f: BernsteinFn, t: float, p: float, q: float, alpha: float = 0.0) -> Classification:
    """Same split with ``exp(b t)``; the bounded branch needs ``alpha >= -1/2``."""
    if not alpha > -1:
        raise ValueError(f"alpha must be > -1, got {alpha}")
    return _classify("laguerre", f, t, p, q, 1.0, alpha >= -0.5)


# ---------------------------------------------------------------------------
# Laguerre Parseval identity and necessary condition


class DivergenceError(RuntimeError):
    """Series terms are not decaying at the truncation order."""


def rho_parseval(tau1: float, tau2: float) -> float:
    return tau1 * tau2 / ((1 - tau1) * (1 - tau2))


@dataclass(frozen=True)
class ParsevalValue:
    value: LogValue
    last_term: LogValue
    tail_estimate: float
    truncation: int


def laguerre_parseval(seq: MultiplierSequence, alpha: float, tau1: float, tau2: float, trunc: int,
                      p: Optional[float] = None, q: Optional[float] = None) -> ParsevalValue:
    """``<A g_tau1, g_tau2>`` on the Gamma measure from the multiplier sequence.

    Terms ``a_n Gamma(n+alpha+1)/(Gamma(alpha+1) n!) rho^n`` are summed up
    to ``trunc``.  If they are still growing there, :class:`DivergenceError`
    is raised; otherwise ``tail_estimate`` is the geometric continuation of
    the last term ratio (relative to the value).
    """
    if not alpha > -1:
        raise ValueError(f"alpha must be > -1, got {alpha}")
    hi1 = 1 / p if p else 1.0
    hi2 = 1 / conjugate(q) if q else 1.0
    if not (0 < tau1 < hi1 and 0 < tau2 < hi2):
        raise ValueError(f"need tau1 in (0, {hi1:g}) and tau2 in (0, {hi2:g}), got {tau1}, {tau2}")
    if trunc < 1:
        raise ValueError("truncation must be >= 1")
    n = np.arange(trunc + 1, dtype=float)
    rho = rho_parseval(tau1, tau2)
    log_terms = (
        seq.log_values(n)
        + gammaln(n + alpha + 1) - gammaln(alpha + 1) - gammaln(n + 1)
        + n * math.log(rho)
    )
    finite = np.isfinite(log_terms)
    last = log_terms[-1]
    if finite[-1] and finite[-2] and last >= log_terms[-2] and last >= np.max(log_terms[finite]) - 1e-12:
        raise DivergenceError(
            f"terms still growing at n={trunc}: log term {last:.4g} (ratio {math.exp(last - log_terms[-2]):.4g})"
        )
    prefactor = -(alpha + 1) * (math.log1p(-tau1) + math.log1p(-tau2))
    log_sum = logsumexp(log_terms)
    if finite[-1] and finite[-2]:
        r = math.exp(last - log_terms[-2])
        tail = math.exp(last - log_sum) * r / (1 - r) if r < 1 else math.inf
    else:
        tail = 0.0
    last_term = LogValue.from_log(prefactor + last) if finite[-1] else ZERO
    return ParsevalValue(LogValue.from_log(prefactor + log_sum), last_term, tail, trunc)


def optimal_taus(n: int, alpha: float, p: float, q: float) -> tuple[float, float]:
    """The degree-dependent pair ``(tau_1n, tau_2n)`` approaching the corner of the allowed box."""
    qc = conjugate(q)
    denom = n + (alpha + 1) * (1 / p + 1 / qc)
    return n / (p * denom), n / (qc * denom)


@dataclass(frozen=True)
class NecessaryConditionReport:
    threshold: float
    margin: float
    n_max: int
    roots_tail: tuple[float, ...]
    first_violation: Optional[int]
    rho_degrees: tuple[int, ...] = field(default=())
    rho_values: tuple[float, ...] = field(default=())
    rho_limit: float = math.nan
    rho_constant: float = math.nan

    @property
    def violated(self) -> bool:
        """The root test fails at the end of the range, not only at an early spike."""
        return self.first_violation is not None and min(self.roots_tail) > self.threshold + self.margin


def multiplier_necessary_condition(seq: MultiplierSequence, p: float, q: float, n_max: int = 100000,
                                   alpha: float = 0.0, margin: float = 1e-3,
                                   rho_degrees=(10, 20, 50, 100, 200, 500, 1000)) -> NecessaryConditionReport:
    """Search for ``a_n^(1/n) > (p-1)/(q-1) + margin`` with ``n <= n_max``.

    Also tabulates ``rho(tau_1n, tau_2n)`` and fits C in
    ``rho_n / rho_limit - 1 ~ C/n``.
    """
    _check_exponents(p, q)
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    threshold = (p - 1) / (q - 1)
    n = np.arange(1, n_max + 1, dtype=float)
    roots = np.exp(seq.log_values(n) / n)
    bad = np.nonzero(roots > threshold + margin)[0]
    first = int(n[bad[0]]) if bad.size else None
    degrees = tuple(int(d) for d in rho_degrees)
    values = tuple(rho_parseval(*optimal_taus(d, alpha, p, q)) for d in degrees)
    limit = (q - 1) / (p - 1)
    inv = 1 / np.array(degrees, dtype=float)
    rel = np.array(values) / limit - 1
    const = float(np.dot(inv, rel) / np.dot(inv, inv))
    return NecessaryConditionReport(threshold, margin, n_max, tuple(float(r) for r in roots[-5:]), first,
                                    degrees, values, limit, const)


__all__ = [
    "Verdict",
    "BilinearVerdict",
    "ObstructionReport",
    "BilinearReport",
    "Classification",
    "ParsevalValue",
    "NecessaryConditionReport",
    "DivergenceError",
    "conjugate",
    "eigen_lower_bound",
    "obstruction_scan",
    "rate_kappa",
    "F_t",
    "F_slope",
    "bilinear_value",
    "bilinear_test",
    "vertex_slope",
    "quadratic_form",
    "classify_ou",
    "classify_laguerre",
    "rho_parseval",
    "laguerre_parseval",
    "optimal_taus",
    "multiplier_necessary_condition",
]
