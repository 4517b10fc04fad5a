"""Subordinated spectral multipliers, the Poisson subordination kernel and the
Jacobi heat kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .bernstein import BernsteinFn, nonlinear_part
from .orthopoly import PolyFamily, eigenvalue, jacobi_endpoint_log_values, normalized_table

TERM_TOL = 1e-12
N_CAP = 20000


class TruncationError(RuntimeError):
    """The heat-kernel series needs more terms than the configured cap."""

    def __init__(self, required: int, cap: int, s: float):
        super().__init__(f"heat kernel at s={s:g} needs N={required} terms, cap is {cap}")
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class MultiplierSequence:
    """A spectral multiplier ``phi_n -> a_n phi_n`` stored through ``log a_n``."""

    family: PolyFamily
    log_coefficient: Callable[[np.ndarray], np.ndarray]
    description: str = ""

    def log_values(self, n) -> np.ndarray:
        n_arr = np.asarray(n)
        if np.any(n_arr < 0):
            raise ValueError("multiplier index must be >= 0")
        return np.asarray(self.log_coefficient(n_arr), dtype=float)

    def __call__(self, n):
        out = np.exp(self.log_values(n))
        return float(out) if out.ndim == 0 else out

    @classmethod
    def from_values(cls, family: PolyFamily, values: Callable, description: str = "") -> MultiplierSequence:
        def log_coefficient(n):
            v = np.asarray(values(n), dtype=float)
            if np.any(v < 0):
                raise ValueError("multiplier values must be >= 0")
            with np.errstate(divide="ignore"):
                return np.log(v)

        return cls(family, log_coefficient, description)

    def truncated(self, cutoff: int) -> MultiplierSequence:
        """``a_n`` for ``n <= cutoff`` and zero afterwards."""
        base = self.log_coefficient
        return MultiplierSequence(
            self.family,
            lambda n: np.where(np.asarray(n) <= cutoff, base(n), -np.inf),
            f"{self.description} cut at {cutoff}",
        )


def subordinated_multiplier(f: BernsteinFn, t: float, family: PolyFamily) -> MultiplierSequence:
    """``a_n = exp(-t f(lam_n))``."""
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    return MultiplierSequence(
        family,
        lambda n: -t * np.asarray(f(eigenvalue(family, n)), dtype=float),
        f"exp(-{t:g} f(lam_n)), f={f.label()}, {family.label()}",
    )


def factorized_log_multiplier(f: BernsteinFn, t: float, lam):
    """Log factors ``(-a t, -t f0(lam), -t b lam)`` whose sum is ``-t f(lam)``."""
    f0 = nonlinear_part(f)
    lam = np.asarray(lam, dtype=float)
    return -f.a * t + 0 * lam, -t * np.asarray(f0(lam)), -t * f.b * lam


# ---------------------------------------------------------------------------
# Poisson subordination


def poisson_subordination(t: float, lam: float) -> float:
    """``(2 sqrt(pi))^-1 int t s^-3/2 exp(-t^2/(4s)) exp(-lam s) ds`` by quadrature.

    After ``u = t^2/(4s)`` the integrand is ``u^-1/2 exp(-u - c/u)/sqrt(pi)``
    with ``c = lam t^2/4``, i.e. ``exp(-c/u)`` averaged over the Gamma(-1/2)
    measure.  The factor ``exp(-c/u)`` has a layer of width ``c`` at the
    origin, so the quadrature runs in ``y = log(u/sqrt(c))``, where the
    integrand is smooth and decays doubly exponentially.
    """
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    c = lam * t * t / 4
    if c == 0:
        return 1.0
    r = math.sqrt(c)

    def integrand(y):
        with np.errstate(over="ignore"):
            return float(np.exp(0.5 * (y - peak) - 2 * r * (np.cosh(y) - np.cosh(peak))))

    # split at the peak of the integrand, which drifts to +inf as c -> 0
    peak = math.asinh(0.25 / r)
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=500)
    value = integrate.quad(integrand, -np.inf, peak, **opts)[0] + integrate.quad(integrand, peak, np.inf, **opts)[0]
    log_scale = 0.5 * math.log(r) + 0.5 * peak - 2 * r * math.cosh(peak)
    return math.exp(log_scale) * value / math.sqrt(math.pi)


def poisson_kernel_identity(t: float, lam: float, tol: float = 1e-8) -> float:
    """Absolute residual between the subordinated heat multiplier and ``exp(-t sqrt(lam))``."""
    residual = abs(poisson_subordination(t, lam) - math.exp(-t * math.sqrt(lam)))
    if not math.isfinite(residual):
        raise ArithmeticError(f"subordination quadrature failed at t={t}, lam={lam}")
    return residual


def poisson_ultra_bound(sigma: float, t: float) -> float:
    """Majorant of the subordinated kernel sup when ``||T_s||_{1->inf} <= (1 ^ s)^(-sigma/2)``.

    Both pieces are integrated numerically in the variable ``u = t^2/(4s)``.
    """
    if not (sigma > 0 and t > 0):
        raise ValueError(f"sigma and t must be > 0, got sigma={sigma}, t={t}")
    cut = t * t / 4
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=500)
    # s in (0, 1]  <->  u in [cut, inf)
    exponent = (sigma - 1) / 2
    head, _ = integrate.quad(lambda u: math.exp(exponent * math.log(u) - u + cut) if u > 0 else 0.0,
                             cut, np.inf, **opts)
    small_time = 4 ** ((sigma + 1) / 2) * t ** (-sigma) * math.exp(-cut) * head
    # s in [1, inf)  <->  u in (0, cut]
    tail, _ = integrate.quad(lambda u: math.exp(-u), 0.0, cut, weight="alg", wvar=(-0.5, 0.0), **opts)
    return (small_time + 2 * tail) / (2 * math.sqrt(math.pi))


def poisson_ultra_ratio(sigma: float, t: float) -> float:
    """``poisson_ultra_bound / (1 ^ t)^-sigma``."""
    return poisson_ultra_bound(sigma, t) * min(1.0, t) ** sigma


# ---------------------------------------------------------------------------
# Jacobi heat kernel


@dataclass(frozen=True)
class HeatKernelEval:
    alpha: float
    beta: float
    s: float
    truncation: int
    tail_bound: float
    value: np.ndarray

    @property
    def scalar(self) -> float:
        return float(self.value)


def _check_heat_params(alpha: float, beta: float, s: float) -> None:
    if alpha < -0.5 or beta < -0.5:
        raise ValueError(f"heat kernel needs alpha, beta >= -1/2, got ({alpha}, {beta})")
    if not s > 0:
        raise ValueError(f"s must be > 0, got {s}")


def heat_truncation(alpha: float, beta: float, s: float, term_tol: float = TERM_TOL,
                    cap: int = N_CAP) -> tuple[int, float]:
    """Truncation order N and a bound on the dropped terms.

    Term n is bounded by ``exp(-s lam_n) * B_n`` with ``B_n`` the squared
    endpoint maximum of ``|j_n|``.  N is the first degree past the peak of
    these bounds where they drop below ``term_tol``.  The bounds have
    decreasing successive ratios past the peak, so the tail is majorized by
    a geometric series.
    """
    _check_heat_params(alpha, beta, s)
    fam = PolyFamily.jacobi(alpha, beta)
    chunk = 256
    start = 0
    peak_seen = -np.inf
    while start <= cap:
        n = np.arange(start, start + chunk)
        right, left = jacobi_endpoint_log_values(fam, n)
        log_terms = -s * eigenvalue(fam, n) + 2 * np.maximum(right, left)
        running_peak = np.maximum.accumulate(np.maximum(log_terms, peak_seen))
        past_peak = log_terms < running_peak
        small = past_peak & (log_terms <= math.log(term_tol))
        hit = np.nonzero(small)[0]
        if hit.size:
            N = int(n[hit[0]])
            if N > cap:
                raise TruncationError(N, cap, s)
            return N, _tail_bound(fam, s, N)
        peak_seen = running_peak[-1]
        start += chunk
    raise TruncationError(_required_order(fam, s, term_tol), cap, s)


def _required_order(fam: PolyFamily, s: float, term_tol: float) -> int:
    n = N_CAP
    while True:
        n *= 2
        right, left = jacobi_endpoint_log_values(fam, n)
        if -s * eigenvalue(fam, n) + 2 * max(right, left) <= math.log(term_tol):
            return n


def _tail_bound(fam: PolyFamily, s: float, N: int) -> float:
    n = np.arange(N + 1, N + 2049)
    right, left = jacobi_endpoint_log_values(fam, n)
    log_terms = -s * eigenvalue(fam, n) + 2 * np.maximum(right, left)
    terms = np.exp(log_terms)
    ratio = math.exp(log_terms[-1] - log_terms[-2])
    rest = terms[-1] * ratio / (1 - ratio) if ratio < 1 else math.inf
    return float(terms.sum() + rest)


def heat_kernel(alpha: float, beta: float, s: float, x, y, term_tol: float = TERM_TOL,
                cap: int = N_CAP) -> HeatKernelEval:
    """``sum exp(-s lam_n) j_n(x) j_n(y)`` on the outer product grid of x and y."""
    N, tail = heat_truncation(alpha, beta, s, term_tol, cap)
    fam = PolyFamily.jacobi(alpha, beta)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    jx = normalized_table(fam, N, xa).values()
    jy = jx if ya is xa else normalized_table(fam, N, ya).values()
    root_damp = np.exp(-0.5 * s * eigenvalue(fam, np.arange(N + 1)))[:, None]
    ax = jx * root_damp
    ay = ax if jy is jx else jy * root_damp
    # accumulate degree by degree: (x, y) and (y, x) see identical arithmetic
    value = np.zeros((xa.size, ya.size))
    for n in range(N + 1):
        value += np.multiply.outer(ax[n], ay[n])
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        value = value[0, 0]
    return HeatKernelEval(alpha, beta, s, N, tail, value)


def jacobi_heat_kernel(alpha: float, beta: float, s: float, x, y, term_tol: float = TERM_TOL) -> float:
    """Heat kernel ``G_s(x, y)`` at a single pair of points."""
    if np.ndim(x) or np.ndim(y):
        raise ValueError("use heat_kernel for arrays of points")
    return float(heat_kernel(alpha, beta, s, float(x), float(y), term_tol).value)


@dataclass(frozen=True)
class UltraEstimate:
    value: float
    argmax: tuple[float, float]
    grid: np.ndarray
    truncation: int


def ultra_grid(alpha: float, beta: float, size: int = 65, refine: int = 12) -> np.ndarray:
    """Chebyshev-Lobatto points plus a geometric cluster at the corner of the larger parameter."""
    cheb = np.cos(np.pi * np.arange(size) / (size - 1))
    corner = 1.0 if alpha >= beta else -1.0
    cluster = corner * (1 - np.geomspace(1e-1, 10.0**-refine, refine))
    return np.unique(np.concatenate([cheb, cluster, [-1.0, 1.0]]))


def ultra_norm_estimate(alpha: float, beta: float, s: float, size: int = 65) -> UltraEstimate:
    """Grid maximum of ``G_s``: a lower estimate of ``||exp(s L)||_{1->inf}``."""
    grid = ultra_grid(alpha, beta, size)
    ev = heat_kernel(alpha, beta, s, grid, grid)
    i, j = np.unravel_index(np.argmax(ev.value), ev.value.shape)
    return UltraEstimate(float(ev.value[i, j]), (float(grid[i]), float(grid[j])), grid, ev.truncation)


__all__ = [
    "MultiplierSequence",
    "HeatKernelEval",
    "UltraEstimate",
    "TruncationError",
    "subordinated_multiplier",
    "factorized_log_multiplier",
    "poisson_subordination",
    "poisson_kernel_identity",
    "poisson_ultra_bound",
    "poisson_ultra_ratio",
    "heat_truncation",
    "heat_kernel",
    "jacobi_heat_kernel",
    "ultra_grid",
    "ultra_norm_estimate",
]
