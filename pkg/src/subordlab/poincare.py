"""Rate functions of super- and weak-Poincare inequalities and their
transformation under Bernstein subordination.

The functional on the right-hand side is taken to be ``Phi(u) = ||u||_1^2``.
Rate functions may take the value ``+inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bernstein import BernsteinFn, LevyKind, inverse


@dataclass(frozen=True)
class RateFunction:
    kind: str  # "super" or "weak"
    fn: Callable[[np.ndarray], np.ndarray]
    description: str = ""
    exponent: Optional[float] = None  # power of 1/r near 0, when known

    def __post_init__(self):
        if self.kind not in ("super", "weak"):
            raise ValueError(f"rate kind must be 'super' or 'weak', got {self.kind!r}")

    def __call__(self, r):
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr <= 0):
            raise ValueError("rate functions are defined for r > 0")
        with np.errstate(over="ignore"):  # overflow lands on the extended value +inf
            out = np.asarray(self.fn(r_arr), dtype=float)
        return float(out) if out.ndim == 0 else out


def power_rate(m: float, c: float = 1.0, kind: str = "super") -> RateFunction:
    """``c r^-m``."""
    return RateFunction(kind, lambda r: c * r ** (-m), f"{c:g} r^-{m:g}", m)


def jacobi_super_rate(alpha: float, beta: float, c: float = 1.0) -> RateFunction:
    """``c (1 + r^-(max(alpha, beta) + 1))``, the Jacobi super-Poincare rate."""
    if alpha < -0.5 or beta < -0.5:
        raise ValueError(f"need alpha, beta >= -1/2, got ({alpha}, {beta})")
    m = max(alpha, beta) + 1
    return RateFunction("super", lambda r: c * (1 + r ** (-m)), f"{c:g}(1 + r^-{m:g})", m)


def _bracketed_inverse(f: BernsteinFn, y: np.ndarray, steps: int = 64) -> np.ndarray:
    """Vectorized ``f^-1`` for general f: geometric bracketing, then bisection.

    ``inf`` where y is not attained (below ``f(0)`` or above ``sup f``).
    """
    y = np.asarray(y, dtype=float)
    out = np.full(y.shape, np.inf)
    out[y == f.a] = 0.0
    live = y > f.a
    lo = np.where(live, 1.0, np.nan)
    hi = lo.copy()
    # double hi until f(hi) >= y, halve lo until f(lo) < y
    for _ in range(2100):
        short = live & (np.asarray(f(hi)) < y)
        if not short.any():
            break
        hi = np.where(short, 2 * hi, hi)
        live &= hi < 1e300
    for _ in range(2100):
        over = live & (np.asarray(f(lo)) >= y)
        if not over.any():
            break
        lo = np.where(over, lo / 2, lo)
        hi = np.where(over, lo * 2, hi)
        tiny = over & (lo < 1e-300)
        out[tiny] = 0.0
        live &= ~tiny
    lo = np.where(live, np.maximum(lo, hi / 2), 1.0)
    hi = np.where(live, hi, 1.0)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        below = np.asarray(f(mid)) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out[live] = hi[live]
    return out


def _inverse_array(f: BernsteinFn, y: np.ndarray) -> np.ndarray:
    """Vectorized ``f^-1`` with the closed forms of :func:`bernstein.inverse`."""
    if f.symbol is None and f.levy.is_empty and f.b > 0:
        out = (y - f.a) / f.b
    elif f.symbol is None and f.levy.kind is LevyKind.STABLE and f.b == 0:
        with np.errstate(invalid="ignore"):
            out = ((y - f.a) / f.levy.scale) ** (1 / f.levy.theta)
    else:
        return _bracketed_inverse(f, y)
    return np.where(y < f.a, np.inf, out)


def transform_super(beta: RateFunction, f: BernsteinFn) -> RateFunction:
    """``beta_f(r) = 4 beta(1 / (2 f^-1(2/r)))``; ``+inf`` where ``2/r`` is not a value of f."""
    if beta.kind != "super":
        raise ValueError("transform_super acts on super-Poincare rates")
    pure_drift = f.symbol is None and f.levy.is_empty and f.a == 0

    def fn(r):
        if pure_drift:
            # f^-1(2/r) = 2/(b r) exactly, so the argument is b r / 4
            return 4.0 * np.asarray(beta.fn(f.b * r / 4.0), dtype=float)
        inv = _inverse_array(f, 2.0 / r)
        finite = np.isfinite(inv)
        arg = np.where(finite, 1.0 / (2.0 * np.where(finite, inv, 1.0)), 1.0)
        return np.where(finite, 4.0 * np.asarray(beta.fn(arg), dtype=float), np.inf)

    return RateFunction("super", fn, f"super transform of [{beta.description}] by {f.label()}")


def transform_weak(alpha: RateFunction, f: BernsteinFn) -> RateFunction:
    """``alpha_f(r) = 2 / f(1 / (2 alpha(r/4)))``."""
    if alpha.kind != "weak":
        raise ValueError("transform_weak acts on weak-Poincare rates")

    def fn(r):
        inner = np.asarray(alpha.fn(r / 4.0), dtype=float)
        if np.any(inner <= 0):
            raise ValueError("weak-Poincare rates must be positive")
        return 2.0 / np.asarray(f(1.0 / (2.0 * inner)), dtype=float)

    return RateFunction("weak", fn, f"weak transform of [{alpha.description}] by {f.label()}")


def loglog_slope(rate: RateFunction, r_min: float, r_max: float, points: int = 200) -> float:
    """Least-squares slope of ``log rate(r)`` against ``log r`` on a log-spaced grid."""
    r = np.geomspace(r_min, r_max, points)
    return float(np.polyfit(np.log(r), np.log(rate(r)), 1)[0])


def is_decreasing(rate: RateFunction, r_min: float = 1e-6, r_max: float = 1e6, points: int = 10_000) -> bool:
    """Non-increasing on a log-spaced sample (``inf`` counts as larger than everything)."""
    values = rate(np.geomspace(r_min, r_max, points))
    return bool(np.all(values[1:] <= values[:-1]))


def inverse_power_constant(f: BernsteinFn, theta: float, lam0: float = 1.0, lam_max: float = 1e8,
                           points: int = 200) -> float:
    """Sampled ``sup_{lam >= lam0} f^-1(lam) / lam^(1/theta)``, the constant in ``f^-1(lam) <= C lam^(1/theta)``."""
    lam = np.geomspace(lam0, lam_max, points)
    ratios = _inverse_array(f, lam) / lam ** (1 / theta)
    return float(np.max(ratios))


__all__ = [
    "RateFunction",
    "power_rate",
    "jacobi_super_rate",
    "transform_super",
    "transform_weak",
    "loglog_slope",
    "is_decreasing",
    "inverse_power_constant",
]
