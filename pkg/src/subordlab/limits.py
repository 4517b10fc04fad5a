"""Rescaled Jacobi families and their Laguerre and Hermite limits.

``S_beta(y) = 1 - 2y/beta`` carries ``(0, beta)`` onto ``(-1, 1)`` and turns
the Jacobi measure into a measure converging to the Gamma measure;
``R_lam(y) = y/sqrt(lam)`` does the same for the symmetric Jacobi measure and
the Gaussian.  Norms on the rescaled side are computed on the Jacobi side,
where the pullbacks are isometries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .logvalue import LogValue
from .measures import DEFAULT_TOL, Measure
from .norm_bounds import eigen_norm, norm_ratio
from .orthopoly import PolyFamily, eigenvalue, eval_classical, eval_normalized

BETA_LADDER = tuple(10.0**k for k in range(1, 7))
N_CAP = 100


@dataclass(frozen=True)
class RescaledFamily:
    """Normalized Jacobi polynomials read on the rescaled variable.

    ``kind`` is ``"near_one"`` (Jacobi(alpha, scale) near x = 1, target
    Laguerre(alpha)) or ``"symmetric"`` (Gegenbauer(scale), target Hermite).
    """

    kind: str
    scale: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("near_one", "symmetric"):
            raise ValueError(f"kind must be 'near_one' or 'symmetric', got {self.kind!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be finite and > 0, got {self.scale}")

    @property
    def measure(self) -> Measure:
        if self.kind == "near_one":
            return Measure.rescaled_jacobi_near_one(self.alpha, self.scale)
        return Measure.rescaled_symmetric_jacobi(self.scale)

    @property
    def base_family(self) -> PolyFamily:
        if self.kind == "near_one":
            return PolyFamily.jacobi(self.alpha, self.scale)
        lam = self.scale
        return PolyFamily.jacobi(lam - 0.5, lam - 0.5)

    @property
    def target(self) -> PolyFamily:
        return PolyFamily.laguerre(self.alpha) if self.kind == "near_one" else PolyFamily.hermite()

    def evaluate(self, n: int, y):
        """Normalized eigenfunction composed with the rescaling, at points y of the rescaled support."""
        return eval_normalized(self.base_family, n, self.measure.to_base(np.asarray(y, dtype=float)))


def limit_residual_jacobi_to_laguerre(n: int, alpha: float, beta_scale: float, x: float) -> float:
    """``|J_n^(alpha, beta)(1 - 2x/beta) - L_n^alpha(x)|``."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if not beta_scale > 2 * x:
        raise ValueError(f"need beta > 2x so that 1 - 2x/beta lies in (-1, 1], got beta={beta_scale}, x={x}")
    jac = eval_classical(PolyFamily.jacobi(alpha, beta_scale), n, 1 - 2 * x / beta_scale)
    lag = eval_classical(PolyFamily.laguerre(alpha), n, x)
    return abs(float(jac - lag))


def limit_residual_gegenbauer_to_hermite(n: int, lambda_scale: float, x: float) -> float:
    """``|lam^(-n/2) C_n^lam(x/sqrt(lam)) - H_n(x)/n!|``."""
    root = math.sqrt(lambda_scale)
    if not abs(x) < root:
        raise ValueError(f"need |x| < sqrt(lambda) = {root:g}, got {x}")
    geg = eval_classical(PolyFamily.gegenbauer(lambda_scale), n, x / root)
    geg = geg * LogValue.from_log(-0.5 * n * math.log(lambda_scale))
    her = eval_classical(PolyFamily.hermite(), n, x) * LogValue.from_log(-math.lgamma(n + 1))
    return abs(float(geg - her))


def rescaled_eigen_root(n: int, alpha: float, beta_scale: float) -> float:
    """``sqrt(lam_n^(alpha, beta)) / sqrt(beta)``, which tends to ``sqrt(n)``."""
    return math.sqrt(eigenvalue(PolyFamily.jacobi(alpha, beta_scale), n) / beta_scale)


def eigen_root_constant(n: int, alpha: float, ladder=BETA_LADDER) -> float:
    """Fitted C in ``|sqrt(lam_n)/sqrt(beta) - sqrt(n)| <= C / sqrt(beta)`` along a ladder."""
    return max(abs(rescaled_eigen_root(n, alpha, b) - math.sqrt(n)) * math.sqrt(b) for b in ladder)


def rescaled_lower_bound(alpha: float, beta_scale: float, t: float, p: float, q: float, n: int,
                         tol: float = DEFAULT_TOL) -> LogValue:
    """``exp(-(t/sqrt(beta)) sqrt(lam_n)) ||j_n||_q / ||j_n||_p`` for Jacobi(alpha, beta)."""
    if not q > 2:
        raise ValueError(f"the rescaled bound is used with q > 2, got q={q}")
    damping = LogValue.from_log(-t * rescaled_eigen_root(n, alpha, beta_scale))
    return damping * norm_ratio(PolyFamily.jacobi(alpha, beta_scale), n, p, q, tol)


def laguerre_limit_value(alpha: float, t: float, p: float, q: float, n: int, tol: float = DEFAULT_TOL) -> LogValue:
    """``exp(-t sqrt(n)) ||l_n||_q / ||l_n||_p``, the large-beta limit of :func:`rescaled_lower_bound`."""
    fam = PolyFamily.laguerre(alpha)
    return LogValue.from_log(-t * math.sqrt(n)) * eigen_norm(fam, n, q, tol) / eigen_norm(fam, n, p, tol)


@dataclass(frozen=True)
class DegenerationCertificate:
    n: int
    beta0: float
    bound: float
    limit_value: float
    found: bool
    target: float
    searched: tuple[tuple[float, float], ...] = field(default=())


def degeneration_certificate(alpha: float, t: float, p: float, q: float, M: float, n_cap: int = N_CAP,
                             ladder=BETA_LADDER, tol: float = DEFAULT_TOL) -> DegenerationCertificate:
    """Find ``n`` whose Laguerre limit value exceeds ``4M``, then ``beta0`` on the
    ladder where the rescaled Jacobi bound exceeds ``2M``.

    If the caps are exhausted the best pair found is returned with
    ``found=False``.
    """
    if not q > 2:
        raise ValueError(f"need q > 2, got q={q}")
    if not M > 0:
        raise ValueError(f"M must be > 0, got {M}")
    n_hit = None
    for n in range(n_cap + 1):
        limit = laguerre_limit_value(alpha, t, p, q, n, tol)
        if limit.logmag > math.log(4 * M):
            n_hit = n
            break
    if n_hit is None:
        return DegenerationCertificate(n_cap, math.nan, math.nan, float(limit), False, 2 * M)
    searched = []
    best = (-math.inf, math.nan)
    for beta in ladder:
        bound = rescaled_lower_bound(alpha, beta, t, p, q, n_hit, tol)
        searched.append((float(beta), float(bound)))
        best = max(best, (bound.logmag, float(beta)))
        if bound.logmag > math.log(2 * M):
            return DegenerationCertificate(n_hit, float(beta), float(bound), float(limit), True, 2 * M, tuple(searched))
    return DegenerationCertificate(n_hit, best[1], math.exp(best[0]), float(limit), False, 2 * M, tuple(searched))


__all__ = [
    "RescaledFamily",
    "DegenerationCertificate",
    "limit_residual_jacobi_to_laguerre",
    "limit_residual_gegenbauer_to_hermite",
    "rescaled_eigen_root",
    "eigen_root_constant",
    "rescaled_lower_bound",
    "laguerre_limit_value",
    "degeneration_certificate",
]
