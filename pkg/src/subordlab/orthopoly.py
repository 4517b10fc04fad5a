"""Classical orthogonal polynomials evaluated in log scale.

Families and their invariant probability measures:

* Hermite ``H_n`` on ``pi**-0.5 * exp(-x**2) dx`` (physicists' convention),
* Laguerre ``L_n^alpha`` on ``x**alpha * exp(-x) dx / Gamma(alpha + 1)``,
* Jacobi ``J_n^(alpha, beta)`` on the normalized Beta-type measure on (-1, 1),
* Gegenbauer ``C_n^lam``, which lives on the Jacobi measure with
  ``alpha = beta = lam - 1/2``.

Every evaluation runs the forward three-term recurrence with a running
log-scale so degree several hundred is safe at any node.  Only the
one-dimensional families are provided; tensor-product Hermite functions
reduce to these coordinatewise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import betaln, gammaln

from .logvalue import LogArray, LogValue

_BIG = 2.0**400
_SMALL = 2.0**-400


class Kind(str, Enum):
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"
    GEGENBAUER = "gegenbauer"


@dataclass(frozen=True)
class PolyFamily:
    kind: Kind
    alpha: float = 0.0
    beta: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        for name in ("alpha", "beta", "lam"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if kind in (Kind.LAGUERRE, Kind.JACOBI) and not self.alpha > -1:
            raise ValueError(f"alpha must be > -1, got {self.alpha}")
        if kind is Kind.JACOBI and not self.beta > -1:
            raise ValueError(f"beta must be > -1, got {self.beta}")
        if kind is Kind.GEGENBAUER and not self.lam > 0:
            raise ValueError(f"Gegenbauer lambda must be > 0, got {self.lam}")

    @classmethod
    def hermite(cls) -> PolyFamily:
        return cls(Kind.HERMITE)

    @classmethod
    def laguerre(cls, alpha: float = 0.0) -> PolyFamily:
        return cls(Kind.LAGUERRE, alpha=alpha)

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> PolyFamily:
        return cls(Kind.JACOBI, alpha=alpha, beta=beta)

    @classmethod
    def gegenbauer(cls, lam: float) -> PolyFamily:
        return cls(Kind.GEGENBAUER, lam=lam)

    @property
    def jacobi_params(self) -> tuple[float, float]:
        if self.kind is Kind.JACOBI:
            return self.alpha, self.beta
        if self.kind is Kind.GEGENBAUER:
            return self.lam - 0.5, self.lam - 0.5
        raise AttributeError(f"{self.kind.value} has no Jacobi parameters")

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind is Kind.HERMITE:
            return -math.inf, math.inf
        if self.kind is Kind.LAGUERRE:
            return 0.0, math.inf
        return -1.0, 1.0

    def label(self) -> str:
        if self.kind is Kind.HERMITE:
            return "hermite"
        if self.kind is Kind.LAGUERRE:
            return f"laguerre(alpha={self.alpha:g})"
        if self.kind is Kind.JACOBI:
            return f"jacobi(alpha={self.alpha:g},beta={self.beta:g})"
        return f"gegenbauer(lambda={self.lam:g})"


# ---------------------------------------------------------------------------
# recurrence coefficients: p_{k+1} = (A_k x + B_k) p_k - C_k p_{k-1}


def _classical_coefficients(family: PolyFamily, n: int):
    k = np.arange(n, dtype=float)
    if family.kind is Kind.HERMITE:
        return np.full(n, 2.0), np.zeros(n), 2.0 * k
    if family.kind is Kind.LAGUERRE:
        a = family.alpha
        return -1.0 / (k + 1), (2 * k + 1 + a) / (k + 1), (k + a) / (k + 1)
    if family.kind is Kind.GEGENBAUER:
        lam = family.lam
        return 2 * (k + lam) / (k + 1), np.zeros(n), (k + 2 * lam - 1) / (k + 1)
    a, b = family.alpha, family.beta
    A = np.empty(n)
    B = np.empty(n)
    C = np.zeros(n)
    if n:
        A[0] = (a + b + 2) / 2
        B[0] = (a - b) / 2
    m = k[1:] + 1  # degree being produced
    s = 2 * m + a + b
    d = 2 * m * (m + a + b) * (s - 2)
    A[1:] = (s - 1) * s * (s - 2) / d
    B[1:] = (s - 1) * (a * a - b * b) / d
    C[1:] = 2 * (m + a - 1) * (m + b - 1) * s / d
    return A, B, C


def _check_domain(family: PolyFamily, x: np.ndarray) -> None:
    if family.kind in (Kind.JACOBI, Kind.GEGENBAUER):
        if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
            raise ValueError(f"{family.label()} is evaluated on [-1, 1]")


def _recurrence(family: PolyFamily, n: int, x: np.ndarray, table: bool):
    """Run the classical recurrence up to degree n in scaled form."""
    A, B, C = _classical_coefficients(family, n)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    scale = np.zeros_like(x)
    if table:
        signs = np.empty((n + 1,) + x.shape, dtype=int)
        logs = np.empty((n + 1,) + x.shape)
        signs[0], logs[0] = 1, 0.0
    for k in range(n):
        p_next = (A[k] * x + B[k]) * p - C[k] * p_prev
        p_prev, p = p, p_next
        big = np.maximum(np.abs(p), np.abs(p_prev))
        fix = (big > _BIG) | ((big < _SMALL) & (big > 0))
        if np.any(fix):
            f = np.where(fix, big, 1.0)
            p = p / f
            p_prev = p_prev / f
            scale = scale + np.log(f)
        if table:
            signs[k + 1] = np.sign(p)
            with np.errstate(divide="ignore"):
                logs[k + 1] = np.log(np.abs(p)) + scale
    if table:
        return LogArray(signs, logs)
    with np.errstate(divide="ignore"):
        return LogArray(np.sign(p).astype(int), np.log(np.abs(p)) + scale)


def _wrap(result: LogArray, scalar: bool):
    if scalar:
        return result.item(())
    return result


def eval_classical(family: PolyFamily, n: int, x):
    """Classical ``H_n``, ``L_n^alpha``, ``J_n^(alpha,beta)`` or ``C_n^lam`` at x.

    Returns a :class:`LogValue` for scalar x and a :class:`LogArray` otherwise.
    """
    n = _check_degree(n)
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    _check_domain(family, xa)
    return _wrap(_recurrence(family, n, xa, table=False), scalar)


def log_norm_sq(family: PolyFamily, n):
    """log of the squared L2 norm of the classical polynomial on its measure."""
    n = np.asarray(n, dtype=float)
    if family.kind is Kind.HERMITE:
        return n * math.log(2.0) + gammaln(n + 1)
    if family.kind is Kind.LAGUERRE:
        a = family.alpha
        return gammaln(n + a + 1) - gammaln(a + 1) - gammaln(n + 1)
    a, b = family.jacobi_params
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (
            -np.log(2 * n + a + b + 1)
            + gammaln(n + a + 1)
            + gammaln(n + b + 1)
            - gammaln(n + a + b + 1)
            - gammaln(n + 1)
            - betaln(a + 1, b + 1)
        )
    val = np.where(n == 0, 0.0, val)
    if family.kind is Kind.GEGENBAUER:
        val = val + 2 * gegenbauer_log_factor(family.lam, n)
    return val[()] if val.ndim == 0 else val


def gegenbauer_log_factor(lam: float, n):
    """log of ``Gamma(lam+1/2) Gamma(n+2 lam) / (Gamma(2 lam) Gamma(n+lam+1/2))``.

    ``C_n^lam`` equals this factor times ``J_n^(lam-1/2, lam-1/2)``.
    """
    n = np.asarray(n, dtype=float)
    return gammaln(lam + 0.5) + gammaln(n + 2 * lam) - gammaln(2 * lam) - gammaln(n + lam + 0.5)


def eval_normalized(family: PolyFamily, n: int, x):
    """L2-normalized eigenfunction (``h_n``, ``l_n^alpha`` or ``j_n``) at x.

    The normalized polynomial is a positive multiple of the classical one, so
    signs follow the classical conventions (e.g. ``(-1)**n`` leading sign
    for Laguerre).
    """
    n = _check_degree(n)
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    _check_domain(family, xa)
    res = _recurrence(family, n, xa, table=False)
    res = LogArray(res.sign, res.logmag - 0.5 * log_norm_sq(family, n))
    return _wrap(res, scalar)


def normalized_table(family: PolyFamily, nmax: int, x) -> LogArray:
    """Normalized eigenfunctions of degrees 0..nmax at x, shape (nmax+1, *x.shape)."""
    nmax = _check_degree(nmax)
    xa = np.asarray(x, dtype=float)
    _check_domain(family, xa)
    res = _recurrence(family, nmax, xa, table=True)
    shift = 0.5 * np.asarray(log_norm_sq(family, np.arange(nmax + 1)))
    shift = shift.reshape((-1,) + (1,) * xa.ndim)
    return LogArray(res.sign, res.logmag - shift)


def classical_table(family: PolyFamily, nmax: int, x) -> LogArray:
    nmax = _check_degree(nmax)
    xa = np.asarray(x, dtype=float)
    _check_domain(family, xa)
    return _recurrence(family, nmax, xa, table=True)


def eigenvalue(family: PolyFamily, n):
    """Eigenvalue of minus the generator on the degree-n eigenfunction."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("degree must be >= 0")
    n_arr = n_arr.astype(float)
    if family.kind in (Kind.HERMITE, Kind.LAGUERRE):
        out = n_arr
    else:
        a, b = family.jacobi_params
        out = n_arr * (n_arr + a + b + 1)
    return float(out) if out.ndim == 0 else out


def jacobi_endpoint_log_values(family: PolyFamily, n):
    """``log|j_n(1)|`` and ``log|j_n(-1)|`` for the normalized Jacobi family."""
    a, b = family.jacobi_params
    n = np.asarray(n, dtype=float)
    half = 0.5 * np.asarray(log_norm_sq(PolyFamily.jacobi(a, b), n))
    right = gammaln(n + a + 1) - gammaln(a + 1) - gammaln(n + 1) - half
    left = gammaln(n + b + 1) - gammaln(b + 1) - gammaln(n + 1) - half
    return right, left


def _check_degree(n) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a natural number, got {n!r}")
    return int(n)


__all__ = [
    "Kind",
    "PolyFamily",
    "LogValue",
    "eval_classical",
    "eval_normalized",
    "normalized_table",
    "classical_table",
    "eigenvalue",
    "log_norm_sq",
    "gegenbauer_log_factor",
    "jacobi_endpoint_log_values",
]
