"""Explicit L^q bounds, Fourier coefficients and growth rates for the
Hermite and Laguerre eigenfunctions.

The measured norm ``||phi_n||_q`` is computed by :func:`eigen_norm`, which
splits the support at the zeros of ``phi_n`` (the nodes of the n-point Gauss
rule of the same measure) so that ``|phi_n|**q`` is integrated to near machine
precision for any real ``q >= 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .logvalue import LogValue, ONE, ZERO
from .measures import DEFAULT_TOL, gauss_rule, lp_norm, measure_for
from .orthopoly import Kind, PolyFamily, eval_normalized

SANDWICH_SLACK = 1e-8


@lru_cache(maxsize=8192)
def eigen_norm(family: PolyFamily, n: int, p: float, tol: float = DEFAULT_TOL) -> LogValue:
    """``||phi_n||_{L^p}`` of the normalized eigenfunction on its own measure."""
    if n == 0:
        return ONE
    measure = measure_for(family)
    zeros = gauss_rule(measure, n).nodes
    return lp_norm(lambda x: eval_normalized(family, n, x), p, measure, tol, zeros=zeros)


def norm_ratio(family: PolyFamily, n: int, p: float, q: float, tol: float = DEFAULT_TOL) -> LogValue:
    return eigen_norm(family, n, q, tol) / eigen_norm(family, n, p, tol)


# ---------------------------------------------------------------------------
# explicit bounds


def hermite_bounds(n: int, q: float) -> tuple[LogValue, LogValue]:
    """Lower and upper bounds for ``||h_n||_{L^q(gamma)}`` when ``q > 2``.

    The lower constant uses Robbins' form of Stirling's formula.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not q > 2:
        raise ValueError(f"the Hermite bounds need q > 2, got q={q}")
    upper = 0.5 * n * math.log(q - 1)
    lower = upper - 0.25 * math.log(2 * math.pi * n) - 1.0 / (24 * n)
    return LogValue.from_log(lower), LogValue.from_log(upper)


def laguerre_lower(n: int, alpha: float, q: float, rho: float) -> LogValue:
    """Lower bound for ``||l_n^alpha||_{L^q(mu_alpha)}`` with geometric rate ``rho``.

    With ``b = rho/(1+rho)`` and ``q' = q/(q-1)`` the bound is
    ``(1-q'b)^((alpha+1)/q') (1-b)^-(alpha+1) sqrt(Gamma(n+alpha+1)/(Gamma(alpha+1) n!)) rho^n``.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not alpha > -1:
        raise ValueError(f"alpha must be > -1, got {alpha}")
    if not q > 2:
        raise ValueError(f"the Laguerre bounds need q > 2, got q={q}")
    if not 0 < rho < q - 1:
        raise ValueError(f"rho must lie in (0, q-1) = (0, {q - 1:g}), got {rho}")
    qc = q / (q - 1)
    b = rho / (1 + rho)
    log_value = (
        (alpha + 1) / qc * math.log1p(-qc * b)
        - (alpha + 1) * math.log1p(-b)
        + 0.5 * (math.lgamma(n + alpha + 1) - math.lgamma(alpha + 1) - math.lgamma(n + 1))
        + n * math.log(rho)
    )
    return LogValue.from_log(log_value)


def laguerre_upper(n: int, alpha: float, q: float) -> LogValue:
    """``(q-1)**n``, valid for ``alpha >= -1/2``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if alpha < -0.5:
        raise ValueError(f"the Laguerre upper bound is only available for alpha >= -1/2, got {alpha}")
    if not q > 2:
        raise ValueError(f"the Laguerre bounds need q > 2, got q={q}")
    return LogValue.from_log(n * math.log(q - 1))


@dataclass(frozen=True)
class NormBoundReport:
    n: int
    q: float
    measured: LogValue
    lower: LogValue
    upper: LogValue
    passed: bool

    def row(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "measured_log": self.measured.logmag,
            "lower_log": self.lower.logmag,
            "upper_log": self.upper.logmag,
            "pass": self.passed,
        }


def _sandwiched(lower: LogValue, measured: LogValue, upper: LogValue, slack: float) -> bool:
    s = math.log1p(slack)
    return lower.logmag <= measured.logmag + s and measured.logmag <= upper.logmag + s


def certify_hermite(n: int, q: float, tol: float = DEFAULT_TOL, slack: float = SANDWICH_SLACK) -> NormBoundReport:
    lower, upper = hermite_bounds(n, q)
    measured = eigen_norm(PolyFamily.hermite(), n, q, tol)
    return NormBoundReport(n, q, measured, lower, upper, _sandwiched(lower, measured, upper, slack))


def certify_laguerre(n: int, alpha: float, q: float, rho: float, tol: float = DEFAULT_TOL,
                     slack: float = SANDWICH_SLACK) -> NormBoundReport:
    lower = laguerre_lower(n, alpha, q, rho)
    upper = laguerre_upper(n, alpha, q)
    measured = eigen_norm(PolyFamily.laguerre(alpha), n, q, tol)
    return NormBoundReport(n, q, measured, lower, upper, _sandwiched(lower, measured, upper, slack))


# ---------------------------------------------------------------------------
# Fourier coefficients against exponentials


def fourier_coefficient(family: PolyFamily, n: int, b: float, normalized: bool = False) -> LogValue:
    """``int phi_n(x) exp(b x) d mu(x)`` in closed form.

    Hermite always uses the normalized ``h_n``.  Laguerre uses the classical
    ``L_n^alpha`` unless ``normalized`` is set, in which case ``l_n^alpha``.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if family.kind is Kind.HERMITE:
        if b == 0:
            return ONE if n == 0 else ZERO
        sign = 1 if (b > 0 or n % 2 == 0) else -1
        log_value = n * math.log(abs(b)) - 0.5 * (n * math.log(2) + math.lgamma(n + 1)) + b * b / 4
        return LogValue.from_log(log_value, sign)
    if family.kind is Kind.LAGUERRE:
        if not b < 1:
            raise ValueError(f"the Gamma measure has no exponential moment at b={b} >= 1")
        alpha = family.alpha
        if b == 0:
            return ONE if n == 0 else ZERO
        sign = (-1) ** n * (1 if (b > 0 or n % 2 == 0) else -1)
        binom = math.lgamma(n + alpha + 1) - math.lgamma(alpha + 1) - math.lgamma(n + 1)
        log_value = binom + n * math.log(abs(b)) - (n + alpha + 1) * math.log1p(-b)
        if normalized:
            log_value -= 0.5 * binom
        return LogValue.from_log(log_value, sign)
    raise ValueError(f"no exponential-coefficient formula for {family.label()}")


def fourier_coefficient_quadrature(family: PolyFamily, n: int, b: float, normalized: bool = False,
                                   dps: int = 80) -> float:
    """Independent check of :func:`fourier_coefficient` by extended-precision quadrature.

    The exponential tilt is absorbed into the measure (a shift for the
    Gaussian, a dilation for the Gamma measure) and the resulting polynomial
    integral is done with an exact Gauss rule in ``dps`` digits.  Extra digits
    are added for small ``|b|``, where the integral is a large cancellation.
    """
    extra = int(n * max(0.0, -math.log10(abs(b)) if b else 0.0)) + n
    with mpmath.workdps(dps + extra):
        m = n // 2 + 2
        mb = mpmath.mpf(b)
        if family.kind is Kind.HERMITE:
            nodes, weights = mpmath.gauss_quadrature(m, "hermite")
            total = mpmath.fsum(weights)
            norm = mpmath.sqrt(mpmath.mpf(2) ** n * mpmath.factorial(n))
            acc = mpmath.fsum(w * mpmath.hermite(n, x + mb / 2) for x, w in zip(nodes, weights))
            value = mpmath.exp(mb * mb / 4) * acc / total / norm
        elif family.kind is Kind.LAGUERRE:
            alpha = mpmath.mpf(family.alpha)
            if alpha == 0:
                nodes, weights = mpmath.gauss_quadrature(m, "laguerre")
            else:
                nodes, weights = mpmath.gauss_quadrature(m, "glaguerre", alpha)
            total = mpmath.fsum(weights)
            acc = mpmath.fsum(w * mpmath.laguerre(n, alpha, x / (1 - mb)) for x, w in zip(nodes, weights))
            value = (1 - mb) ** (-(alpha + 1)) * acc / total
            if normalized:
                value /= mpmath.sqrt(mpmath.binomial(n + alpha, n))
        else:
            raise ValueError(f"no exponential-coefficient formula for {family.label()}")
        return float(value)


# ---------------------------------------------------------------------------
# growth rates


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    window: tuple[int, ...]
    log_ratios: tuple[float, ...]

    @property
    def first(self) -> int:
        return self.window[0]

    @property
    def last(self) -> int:
        return self.window[-1]


def check_window(n_window, minimum: int = 10, size: int = 5) -> tuple[int, ...]:
    window = tuple(sorted(set(int(n) for n in n_window)))
    if len(window) < size:
        raise ValueError(f"a rate window needs at least {size} distinct degrees, got {len(window)}")
    if window[0] < minimum:
        raise ValueError(f"rate windows start at degree >= {minimum}, got {window[0]}")
    return window


def growth_rate(family: PolyFamily, p: float, q: float, n_window, tol: float = DEFAULT_TOL) -> RateFit:
    """Least-squares slope of ``n -> log(||phi_n||_q / ||phi_n||_p)`` over a window."""
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    window = check_window(n_window)
    logs = np.array([norm_ratio(family, n, p, q, tol).logmag for n in window])
    slope, intercept = np.polyfit(np.array(window, dtype=float), logs, 1)
    return RateFit(float(slope), float(intercept), window, tuple(float(v) for v in logs))


def predicted_rate(family: PolyFamily, p: float, q: float) -> float:
    """Limiting per-degree slope: half of ``log((q-1)/(p-1))`` for Hermite, the full log for Laguerre."""
    full = math.log((q - 1) / (p - 1))
    if family.kind is Kind.HERMITE:
        return 0.5 * full
    if family.kind is Kind.LAGUERRE:
        return full
    raise ValueError(f"no geometric rate for {family.label()}")


__all__ = [
    "NormBoundReport",
    "RateFit",
    "eigen_norm",
    "norm_ratio",
    "hermite_bounds",
    "laguerre_lower",
    "laguerre_upper",
    "certify_hermite",
    "certify_laguerre",
    "fourier_coefficient",
    "fourier_coefficient_quadrature",
    "growth_rate",
    "predicted_rate",
    "check_window",
]
