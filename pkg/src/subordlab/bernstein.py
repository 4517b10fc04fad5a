"""Bernstein functions given by Levy-Khintchine triplets.

A Bernstein function is ``f(lam) = a + b*lam + int (1 - exp(-s*lam)) nu(ds)``
with killing ``a >= 0``, drift ``b >= 0`` and a Levy measure ``nu`` satisfying
``int min(1, s) nu(ds) < inf``.  The catalogue covers finite atom lists and
three densities, each with a closed-form symbol:

==================  ======================================  ===========================
name                density of ``nu``                       symbol part
==================  ======================================  ===========================
stable(theta)       ``c theta s^(-1-theta) / Gamma(1-theta)``  ``c lam^theta``
tempered(theta, m)  stable density times ``exp(-m s)``      ``c((lam+m)^theta - m^theta)``
gamma(m)            ``c exp(-m s) / s``                      ``c log(1 + lam/m)``
==================  ======================================  ===========================
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize
from scipy.special import comb

DRIFT_LADDER = (1e5, 1e6, 1e7)
LOWER_ORDER_GRID = tuple(10.0**k for k in range(2, 8))
LOWER_ORDER_FLOOR = 1e-6
LOWER_ORDER_MAX_DECAY = 0.02


class LevyKind(str, Enum):
    NONE = "none"
    ATOMS = "atoms"
    STABLE = "stable"
    TEMPERED = "tempered_stable"
    GAMMA = "gamma"


@dataclass(frozen=True)
class LevySpec:
    kind: LevyKind = LevyKind.NONE
    atoms: tuple[tuple[float, float], ...] = ()
    theta: float = 0.5
    scale: float = 1.0
    tilt: float = 0.0

    def __post_init__(self):
        kind = LevyKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "atoms", tuple((float(s), float(w)) for s, w in self.atoms))
        if kind is LevyKind.ATOMS:
            if not self.atoms:
                raise ValueError("an atomic Levy measure needs at least one atom")
            for s, w in self.atoms:
                if not (s > 0 and w > 0 and math.isfinite(s) and math.isfinite(w)):
                    raise ValueError(f"atoms need location > 0 and mass > 0, got ({s}, {w})")
        if kind in (LevyKind.STABLE, LevyKind.TEMPERED) and not 0 < self.theta < 1:
            raise ValueError(f"stable index must lie in (0, 1), got {self.theta}")
        if kind in (LevyKind.TEMPERED, LevyKind.GAMMA) and not self.tilt > 0:
            raise ValueError(f"exponential tilt must be > 0, got {self.tilt}")
        if kind is not LevyKind.NONE and kind is not LevyKind.ATOMS and not self.scale > 0:
            raise ValueError(f"density scale must be > 0, got {self.scale}")

    @property
    def is_empty(self) -> bool:
        return self.kind is LevyKind.NONE

    # -- density description: nu(ds) = s**power * smooth(s) ds near s = 0
    @property
    def _power(self) -> float:
        if self.kind in (LevyKind.STABLE, LevyKind.TEMPERED):
            return -1.0 - self.theta
        return -1.0

    def _smooth(self, s):
        if self.kind in (LevyKind.STABLE, LevyKind.TEMPERED):
            c = self.scale * self.theta / math.gamma(1 - self.theta)
            return c * np.exp(-self.tilt * s) if self.kind is LevyKind.TEMPERED else c + 0 * s
        if self.kind is LevyKind.GAMMA:
            return self.scale * np.exp(-self.tilt * s)
        raise ValueError(f"{self.kind.value} has no density")

    def density(self, s):
        s = np.asarray(s, dtype=float)
        return s**self._power * self._smooth(s)

    def symbol(self, lam):
        """``int (1 - exp(-s lam)) nu(ds)`` in closed form."""
        lam = np.asarray(lam, dtype=float)
        if self.kind is LevyKind.NONE:
            return np.zeros_like(lam)
        if self.kind is LevyKind.ATOMS:
            return sum(w * -np.expm1(-s * lam) for s, w in self.atoms)
        if self.kind is LevyKind.STABLE:
            return self.scale * lam**self.theta
        if self.kind is LevyKind.TEMPERED:
            m = self.tilt
            return self.scale * m**self.theta * np.expm1(self.theta * np.log1p(lam / m))
        return self.scale * np.log1p(lam / self.tilt)

    def symbol_quadrature(self, lam: float) -> float:
        """The same integral by quadrature after the substitution ``u = s*lam``.

        On ``(0, 1]`` the algebraic factor ``u**(power+1)`` is carried by the
        quadrature weight.  A tilted density decays exponentially, so the rest
        of the half-line is integrated directly; the pure stable density only
        decays like a power and is mapped back to ``(0, 1]`` by ``u = 1/v``.
        """
        lam = float(lam)
        if self.kind is LevyKind.NONE or lam == 0:
            return 0.0
        if self.kind is LevyKind.ATOMS:
            return float(self.symbol(lam))
        e = self._power
        scale = lam ** (-e - 1)

        def near(u):
            return -math.expm1(-u) / u * scale * float(self._smooth(u / lam)) if u > 0 else scale * float(self._smooth(0.0))

        opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
        head, _ = integrate.quad(near, 0.0, 1.0, weight="alg", wvar=(e + 1, 0.0), **opts)
        if self.kind is LevyKind.STABLE:
            c = scale * float(self._smooth(1.0))  # constant for the untilted density

            def far(v):
                return -math.expm1(-1.0 / v) * c if v > 0 else c
            tail, _ = integrate.quad(far, 0.0, 1.0, weight="alg", wvar=(-e - 2, 0.0), **opts)
        else:
            def far(u):
                return -math.expm1(-u) * float(self.density(u / lam)) / lam
            tail, _ = integrate.quad(far, 1.0, np.inf, **opts)
        return head + tail

    def truncated_mass(self) -> float:
        """``int min(1, s) nu(ds)``; finite for every catalogue entry."""
        if self.kind is LevyKind.NONE:
            return 0.0
        if self.kind is LevyKind.ATOMS:
            return sum(min(1.0, s) * w for s, w in self.atoms)
        if self.kind is LevyKind.STABLE:
            c = self.scale * self.theta / math.gamma(1 - self.theta)
            return c * (1 / (1 - self.theta) + 1 / self.theta)
        e = self._power
        head, _ = integrate.quad(lambda s: float(self._smooth(s)), 0.0, 1.0, weight="alg", wvar=(e + 1, 0.0))
        tail, _ = integrate.quad(lambda s: float(self.density(s)), 1.0, np.inf)
        return head + tail

    def to_dict(self) -> dict:
        if self.kind is LevyKind.NONE:
            return {"type": "none"}
        if self.kind is LevyKind.ATOMS:
            return {"type": "atoms", "atoms": [[s, w] for s, w in self.atoms]}
        params = {"scale": self.scale}
        if self.kind in (LevyKind.STABLE, LevyKind.TEMPERED):
            params["theta"] = self.theta
        if self.kind in (LevyKind.TEMPERED, LevyKind.GAMMA):
            params["tilt"] = self.tilt
        return {"type": self.kind.value, "params": params}

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> LevySpec:
        if not d:
            return cls()
        kind = LevyKind(d.get("type", "none"))
        if kind is LevyKind.ATOMS:
            return cls(kind, atoms=tuple(tuple(a) for a in d["atoms"]))
        params = d.get("params", {})
        return cls(kind, theta=params.get("theta", 0.5), scale=params.get("scale", 1.0), tilt=params.get("tilt", 0.0))


@dataclass(frozen=True)
class BernsteinFn:
    """``f(lam) = a + b*lam + int (1 - exp(-s*lam)) nu(ds)``.

    ``symbol`` optionally overrides the closed form; it must describe the same
    function as the triplet (checked by :func:`drift_estimate`).
    """

    a: float = 0.0
    b: float = 0.0
    levy: LevySpec = LevySpec()
    name: str = ""
    symbol: Optional[Callable] = field(default=None, compare=False, repr=False)
    allow_zero: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        for attr in ("a", "b"):
            v = getattr(self, attr)
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{attr} must be a finite real >= 0, got {v}")
        if not self.allow_zero and self.a == 0 and self.b == 0 and self.levy.is_empty:
            raise ValueError("f = 0 is excluded: give a positive killing, drift or a Levy measure")

    # -- catalogue
    @classmethod
    def drift(cls, b: float = 1.0, a: float = 0.0) -> BernsteinFn:
        return cls(a, b, name=f"drift({b:g})")

    @classmethod
    def stable(cls, theta: float, scale: float = 1.0, a: float = 0.0, b: float = 0.0) -> BernsteinFn:
        return cls(a, b, LevySpec(LevyKind.STABLE, theta=theta, scale=scale), name=f"stable({theta:g})")

    @classmethod
    def sqrt(cls) -> BernsteinFn:
        return cls.stable(0.5)

    @classmethod
    def tempered_stable(cls, theta: float, tilt: float, scale: float = 1.0) -> BernsteinFn:
        return cls(levy=LevySpec(LevyKind.TEMPERED, theta=theta, scale=scale, tilt=tilt),
                   name=f"tempered_stable({theta:g},{tilt:g})")

    @classmethod
    def gamma(cls, tilt: float = 1.0, scale: float = 1.0) -> BernsteinFn:
        return cls(levy=LevySpec(LevyKind.GAMMA, scale=scale, tilt=tilt), name=f"gamma({tilt:g})")

    @classmethod
    def atoms(cls, atoms, a: float = 0.0, b: float = 0.0) -> BernsteinFn:
        return cls(a, b, LevySpec(LevyKind.ATOMS, atoms=tuple(atoms)), name="atoms")

    # -- evaluation
    def __call__(self, lam):
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0):
            raise ValueError("Bernstein functions are evaluated at lam >= 0")
        if self.symbol is not None:
            out = np.asarray(self.symbol(lam_arr), dtype=float)
        else:
            out = self.a + self.b * lam_arr + self.levy.symbol(lam_arr)
        return float(out) if out.ndim == 0 else out

    def quadrature(self, lam: float) -> float:
        if lam < 0:
            raise ValueError("Bernstein functions are evaluated at lam >= 0")
        return self.a + self.b * lam + self.levy.symbol_quadrature(lam)

    @property
    def is_linear(self) -> bool:
        return self.levy.is_empty

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "levy": self.levy.to_dict()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> BernsteinFn:
        unknown = set(d) - {"a", "b", "levy", "name"}
        if unknown:
            raise ValueError(f"unknown Bernstein triplet keys: {sorted(unknown)}")
        return cls(d.get("a", 0.0), d.get("b", 0.0), LevySpec.from_dict(d.get("levy")), name=d.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> BernsteinFn:
        return cls.from_dict(json.loads(text))

    def label(self) -> str:
        return self.name or self.to_json()


CATALOGUE = {
    "sqrt": BernsteinFn.sqrt,
    "poisson": BernsteinFn.sqrt,
    "identity": BernsteinFn.drift,
    "gamma": BernsteinFn.gamma,
}


def parse_bernstein(text: str) -> BernsteinFn:
    """A catalogue name (``sqrt``, ``identity``, ``stable:0.3``) or an inline JSON triplet."""
    text = text.strip()
    if text.startswith("{"):
        return BernsteinFn.from_json(text)
    name, _, arg = text.partition(":")
    if name == "stable":
        return BernsteinFn.stable(float(arg))
    if name in CATALOGUE:
        return CATALOGUE[name]()
    raise ValueError(f"unknown Bernstein function {text!r}; use JSON or one of {sorted(CATALOGUE) + ['stable:THETA']}")


def evaluate(f: BernsteinFn, lam, method: str = "closed"):
    """``f(lam)`` by the closed form (default) or by quadrature of the Levy integral."""
    if method == "closed":
        return f(lam)
    if method == "quadrature":
        if np.ndim(lam) == 0:
            return f.quadrature(float(lam))
        return np.array([f.quadrature(float(x)) for x in np.ravel(lam)]).reshape(np.shape(lam))
    raise ValueError(f"unknown method {method!r}")


def nonlinear_part(f: BernsteinFn) -> BernsteinFn:
    """``f0(lam) = f(lam) - a - b*lam``, the pure jump part (may be identically 0)."""
    sym = None
    if f.symbol is not None:
        sym = lambda lam: f.symbol(lam) - f.a - f.b * np.asarray(lam, dtype=float)  # noqa: E731
    return BernsteinFn(0.0, 0.0, f.levy, name=f"nonlinear({f.label()})", symbol=sym, allow_zero=True)


def _aitken(x0: float, x1: float, x2: float) -> float:
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if denom == 0 or not math.isfinite(denom):
        return x2
    return x2 - d2 * d2 / denom


def drift_estimate(f: BernsteinFn, ladder=DRIFT_LADDER, rtol: float = 1e-3, check: bool = True) -> float:
    """Extrapolated ``lim f(lam)/lam`` from three points of a geometric ladder.

    With ``check`` set, disagreement with the stored drift beyond
    ``rtol * max(b, 1)`` raises, signalling a symbol that does not belong to
    the triplet.
    """
    ratios = [f(lam) / lam for lam in ladder]
    est = _aitken(*ratios)
    if check and abs(est - f.b) > rtol * max(abs(f.b), 1.0):
        raise ValueError(f"drift estimate {est:.6g} disagrees with the triplet drift {f.b:.6g}")
    return est


def lower_order_ratio(f: BernsteinFn, theta: float, grid=LOWER_ORDER_GRID) -> float:
    """``min lam^-theta f(lam)`` over the sampling grid."""
    if not 0 < theta <= 1:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    lam = np.asarray(grid, dtype=float)
    return float(np.min(f(lam) * lam**-theta))


def lower_order_check(f: BernsteinFn, theta: float, floor: float = LOWER_ORDER_FLOOR, grid=LOWER_ORDER_GRID,
                      max_decay: float = LOWER_ORDER_MAX_DECAY) -> bool:
    """Sampled surrogate for ``liminf lam^-theta f(lam) > 0``.

    The minimum of ``lam^-theta f(lam)`` over the grid must exceed ``floor``
    and its log-log slope over the last grid step must be at least
    ``-max_decay``: a ratio still decaying like a power at the top of the
    grid has liminf 0 even when it is above the floor there.
    """
    if lower_order_ratio(f, theta, grid) <= floor:
        return False
    lam = np.asarray(grid, dtype=float)[-2:]
    vals = f(lam) * lam**-theta
    slope = math.log(vals[1] / vals[0]) / math.log(lam[1] / lam[0])
    return slope >= -max_decay


def inverse(f: BernsteinFn, y: float, rtol: float = 1e-12) -> float:
    """``f^-1(y)`` for strictly increasing ``f``; ``inf`` when ``y`` is not attained.

    Closed forms for drift-only and pure stable functions; root bracketing
    otherwise.
    """
    if y < f.a:
        return math.inf
    if y == f.a:
        return 0.0
    if f.symbol is None:
        if f.levy.is_empty:
            return (y - f.a) / f.b if f.b > 0 else math.inf
        if f.levy.kind is LevyKind.STABLE and f.b == 0:
            return ((y - f.a) / f.levy.scale) ** (1 / f.levy.theta)
    hi = 1.0
    while f(hi) < y:
        hi *= 2
        if hi > 1e300:
            return math.inf
    return optimize.brentq(lambda lam: f(lam) - y, 0.0, hi, xtol=1e-300, rtol=max(rtol, 4 * np.finfo(float).eps))


def finite_difference(f: BernsteinFn, lam: float, order: int, h: Optional[float] = None) -> float:
    """Central difference approximation of the ``order``-th derivative at ``lam``."""
    if h is None:
        h = min(0.1, lam / (order + 1)) if lam > 0 else 0.1
    k = np.arange(order + 1)
    pts = lam + (order / 2 - k) * h
    coeffs = (-1.0) ** k * comb(order, k)
    return float(np.dot(coeffs, f(pts)) / h**order)


__all__ = [
    "LevyKind",
    "LevySpec",
    "BernsteinFn",
    "CATALOGUE",
    "parse_bernstein",
    "evaluate",
    "nonlinear_part",
    "drift_estimate",
    "lower_order_ratio",
    "lower_order_check",
    "inverse",
    "finite_difference",
]
