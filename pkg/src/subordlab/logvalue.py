"""Signed log-magnitude numbers.

Degree-n eigenfunction norms grow like ``(q-1)**(n/2)`` and beyond, so most
quantities in this package are carried as ``sign * exp(logmag)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

NEG_INF = float("-inf")


@dataclass(frozen=True, order=False)
class LogValue:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign`` is one of -1, 0, +1; when ``sign == 0`` the magnitude is ``-inf``.
    """

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0 and self.logmag != NEG_INF:
            object.__setattr__(self, "logmag", NEG_INF)
        if self.sign != 0 and math.isnan(self.logmag):
            raise ValueError("logmag is NaN")

    # construction -----------------------------------------------------
    @classmethod
    def from_float(cls, x: float) -> LogValue:
        x = float(x)
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        if x == 0.0:
            return cls(0, NEG_INF)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> LogValue:
        if logmag == NEG_INF:
            return cls(0, NEG_INF)
        return cls(sign, float(logmag))

    # conversion -------------------------------------------------------
    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.logmag > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.logmag)

    @property
    def value(self) -> float:
        return float(self)

    def log(self) -> float:
        """Natural log; only defined for positive values."""
        if self.sign <= 0:
            raise ValueError("log of a non-positive LogValue")
        return self.logmag

    def log10(self) -> float:
        return self.log() / math.log(10.0)

    # arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> LogValue:
        if isinstance(other, LogValue):
            return other
        return LogValue.from_float(other)

    def __neg__(self) -> LogValue:
        return LogValue(-self.sign, self.logmag)

    def __abs__(self) -> LogValue:
        return LogValue(abs(self.sign), self.logmag)

    def __mul__(self, other) -> LogValue:
        o = self._coerce(other)
        if self.sign == 0 or o.sign == 0:
            return LogValue(0, NEG_INF)
        return LogValue(self.sign * o.sign, self.logmag + o.logmag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogValue:
        o = self._coerce(other)
        if o.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return self
        return LogValue(self.sign * o.sign, self.logmag - o.logmag)

    def __rtruediv__(self, other) -> LogValue:
        return self._coerce(other) / self

    def __pow__(self, exponent: float) -> LogValue:
        if self.sign == 0:
            if exponent > 0:
                return self
            raise ZeroDivisionError("0 to a non-positive power")
        if self.sign < 0:
            if float(exponent).is_integer():
                s = -1 if int(exponent) % 2 else 1
                return LogValue(s, self.logmag * exponent)
            raise ValueError("non-integer power of a negative LogValue")
        return LogValue(1, self.logmag * exponent)

    def __add__(self, other) -> LogValue:
        o = self._coerce(other)
        if self.sign == 0:
            return o
        if o.sign == 0:
            return self
        big, small = (self, o) if self.logmag >= o.logmag else (o, self)
        r = math.exp(small.logmag - big.logmag)
        if big.sign == small.sign:
            return LogValue(big.sign, big.logmag + math.log1p(r))
        if r == 1.0:
            return LogValue(0, NEG_INF)
        return LogValue(big.sign, big.logmag + math.log1p(-r))

    __radd__ = __add__

    def __sub__(self, other) -> LogValue:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LogValue:
        return self._coerce(other) - self

    # ordering ---------------------------------------------------------
    def _key(self):
        # monotone in the represented real value
        if self.sign > 0:
            return (1, self.logmag)
        if self.sign < 0:
            return (-1, -self.logmag)
        return (0, 0.0)

    def __lt__(self, other) -> bool:
        return self._key() < self._coerce(other)._key()

    def __le__(self, other) -> bool:
        return self._key() <= self._coerce(other)._key()

    def __gt__(self, other) -> bool:
        return self._key() > self._coerce(other)._key()

    def __ge__(self, other) -> bool:
        return self._key() >= self._coerce(other)._key()

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogValue(0)"
        return f"LogValue({'-' if self.sign < 0 else '+'}exp({self.logmag!r}))"


ZERO = LogValue(0, NEG_INF)
ONE = LogValue(1, 0.0)


class LogArray(NamedTuple):
    """Elementwise signed log magnitudes (arrays of equal shape)."""

    sign: np.ndarray
    logmag: np.ndarray

    @classmethod
    def from_values(cls, x) -> LogArray:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return cls(np.sign(x).astype(int), np.log(np.abs(x)))

    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.sign * np.exp(self.logmag)

    def select(self, idx) -> LogArray:
        return LogArray(self.sign[idx], self.logmag[idx])

    def item(self, idx=()) -> LogValue:
        s = int(self.sign[idx])
        return LogValue(s, float(self.logmag[idx]) if s else NEG_INF)


def as_logarray(v) -> LogArray:
    """Accept a LogArray, a LogValue or plain floats."""
    if isinstance(v, LogArray):
        return v
    if isinstance(v, LogValue):
        return LogArray(np.array(v.sign), np.array(v.logmag))
    return LogArray.from_values(v)


def signed_logsumexp(signs, logs, log_weights=None) -> LogValue:
    """``sum_i w_i * s_i * exp(l_i)`` without overflow.

    Accuracy is relative to ``sum_i w_i * exp(l_i)``; sums with heavy
    cancellation lose digits as they would in plain arithmetic.
    """
    signs = np.asarray(signs)
    logs = np.asarray(logs, dtype=float)
    if log_weights is not None:
        logs = logs + np.asarray(log_weights, dtype=float)
    mask = (signs != 0) & np.isfinite(logs)
    if not np.any(mask):
        return ZERO
    s = signs[mask]
    l = logs[mask]
    top = l.max()
    total = float(np.sum(s * np.exp(l - top)))
    if total == 0.0:
        return ZERO
    return LogValue(1 if total > 0 else -1, top + math.log(abs(total)))


def logsumexp(logs) -> float:
    logs = np.asarray(logs, dtype=float)
    if logs.size == 0:
        return NEG_INF
    top = np.max(logs)
    if not np.isfinite(top):
        return float(top)
    return float(top + np.log(np.sum(np.exp(logs - top))))
