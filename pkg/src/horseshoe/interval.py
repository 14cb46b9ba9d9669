"""Outward-rounded interval arithmetic over IEEE doubles.

Every operation computes its bounds in round-to-nearest and then moves each
bound one unit in the last place outward with ``nextafter``.  A correctly
rounded result is within half an ulp of the exact value, so the nudged bounds
always enclose the exact real result.  No global rounding mode is touched,
which keeps the arithmetic safe under threads and numba kernels.

Two layers are provided:

* :class:`Interval`, a value type whose bounds may be Python floats or numpy
  arrays (elementwise, broadcasting) -- used by the Krawczyk code and tests.
* ``njit`` scalar kernels (``iadd``, ``imul``, ...) returning ``(lo, hi)``
  tuples, used inside the compiled cubical-graph loops.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from numba import njit

__all__ = [
    "IntervalError",
    "IntervalOverflowError",
    "IntervalDomainError",
    "IntervalDivisionError",
    "Interval",
    "IntervalBox",
    "from_decimal",
    "from_fraction",
    "cadd",
    "csub",
    "cmul",
    "csqr",
]


class IntervalError(ArithmeticError):
    pass


class IntervalOverflowError(IntervalError):
    pass


class IntervalDomainError(IntervalError):
    pass


class IntervalDivisionError(IntervalError, ZeroDivisionError):
    pass


_INF = np.inf


def _down(x):
    return np.nextafter(x, -_INF)


def _up(x):
    return np.nextafter(x, _INF)


def _check_finite(lo, hi):
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise IntervalOverflowError("interval bound overflowed to infinity")


def _exact_down(v: Fraction) -> float:
    f = float(v)
    if Fraction(f) > v:
        f = math.nextafter(f, -math.inf)
    return f


def _exact_up(v: Fraction) -> float:
    f = float(v)
    if Fraction(f) < v:
        f = math.nextafter(f, math.inf)
    return f


class Interval:
    """Closed interval ``[lo, hi]``; bounds may be scalars or equal-shape arrays.

    Arithmetic with plain numbers treats them as exact binary floats.  Use
    :func:`from_decimal` for decimal literals such as ``"-5.4"`` that are not
    representable.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if np.ndim(lo) == 0 and np.ndim(hi) == 0:
            lo, hi = float(lo), float(hi)
        else:
            lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
            lo, hi = lo.copy(), hi.copy()
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise IntervalDomainError("NaN interval bound")
        _check_finite(lo, hi)
        if np.any(lo > hi):
            raise IntervalDomainError(f"empty interval: lo > hi ({lo!r} > {hi!r})")
        self.lo = lo
        self.hi = hi

    # -- construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, lo, hi):
        _check_finite(lo, hi)
        obj = cls.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval(x, x)

    @classmethod
    def hull_of(cls, values) -> "Interval":
        v = np.asarray(values, float)
        return cls(np.min(v), np.max(v))

    # -- basic queries --------------------------------------------------------
    @property
    def shape(self):
        return np.shape(self.lo)

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, idx) -> "Interval":
        return Interval._raw(np.asarray(self.lo)[idx], np.asarray(self.hi)[idx])

    def width(self):
        return _up(self.hi - self.lo)

    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    def rad(self):
        m = self.mid()
        return np.maximum(_up(self.hi - m), _up(m - self.lo))

    def mag(self):
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self):
        return np.where((self.lo <= 0) & (self.hi >= 0), 0.0,
                        np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def contains(self, x):
        """True where ``x`` (number or interval) lies in ``self``."""
        if isinstance(x, Interval):
            return (self.lo <= x.lo) & (x.hi <= self.hi)
        return (self.lo <= x) & (x <= self.hi)

    def interior_contains(self, x: "Interval"):
        return (self.lo < x.lo) & (x.hi < self.hi)

    def contains_zero(self):
        return (self.lo <= 0.0) & (self.hi >= 0.0)

    def overlaps(self, other: "Interval"):
        return (self.lo <= other.hi) & (other.lo <= self.hi)

    def hull(self, other) -> "Interval":
        other = Interval._coerce(other)
        return Interval._raw(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if np.any(lo > hi):
            return None
        return Interval._raw(lo, hi)

    def is_point(self):
        return self.lo == self.hi

    # -- arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = Interval._coerce(other)
        return Interval._raw(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = Interval._coerce(other)
        return Interval._raw(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return Interval._coerce(other) - self

    def __mul__(self, other):
        o = Interval._coerce(other)
        los, his = [], []
        for x, y in ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)):
            lo_k, hi_k = _prod_bounds(x, y)
            los.append(lo_k)
            his.append(hi_k)
        lo = np.minimum(np.minimum(los[0], los[1]), np.minimum(los[2], los[3]))
        hi = np.maximum(np.maximum(his[0], his[1]), np.maximum(his[2], his[3]))
        return Interval._raw(_scalar(lo), _scalar(hi))

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        """Enclosure of ``{x**2 : x in self}`` (never negative)."""
        _, a2 = _prod_bounds(self.lo, self.lo)
        _, b2 = _prod_bounds(self.hi, self.hi)
        hi = np.maximum(a2, b2)
        m = np.minimum(np.abs(self.lo), np.abs(self.hi))
        m2, _ = _prod_bounds(m, m)
        straddle = (self.lo <= 0.0) & (self.hi >= 0.0)
        lo = np.where(straddle, 0.0, np.maximum(m2, 0.0))
        return Interval._raw(_scalar(lo), _scalar(hi))

    def reciprocal(self) -> "Interval":
        if np.any(self.contains_zero()):
            raise IntervalDivisionError("division by an interval containing 0")
        return Interval._raw(_down(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, other):
        o = Interval._coerce(other)
        if np.any(o.contains_zero()):
            raise IntervalDivisionError("division by an interval containing 0")
        los, his = [], []
        for x, y in ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)):
            q = x / y
            # a quotient is exactly zero only for a zero numerator
            exact = (x == 0.0)
            los.append(np.where(exact, q, _down(q)))
            his.append(np.where(exact, q, _up(q)))
        lo = np.minimum(np.minimum(los[0], los[1]), np.minimum(los[2], los[3]))
        hi = np.maximum(np.maximum(his[0], his[1]), np.maximum(his[2], his[3]))
        return Interval._raw(_scalar(lo), _scalar(hi))

    def __rtruediv__(self, other):
        return Interval._coerce(other) / self

    def scalar_div(self, divisor) -> "Interval":
        return self / divisor

    def sqrt(self) -> "Interval":
        """Enclosure of ``{sqrt(x) : x in self, x >= 0}``."""
        if np.any(self.hi < 0):
            raise IntervalDomainError("sqrt of an interval with hi < 0")
        lo = np.maximum(self.lo, 0.0)
        slo = np.sqrt(lo)
        shi = np.sqrt(self.hi)
        slo = np.where(slo == 0.0, 0.0, np.maximum(_down(slo), 0.0))
        shi = np.where(shi == 0.0, 0.0, _up(shi))
        return Interval._raw(_scalar(slo), _scalar(shi))

    sqrt_nn = sqrt

    def __abs__(self):
        lo = self.mig()
        if np.ndim(lo) == 0:
            lo = float(lo)
        return Interval._raw(lo, self.mag())

    # -- comparisons that are certain ------------------------------------------
    def certainly_lt(self, other):
        o = Interval._coerce(other)
        return self.hi < o.lo

    def certainly_gt(self, other):
        o = Interval._coerce(other)
        return self.lo > o.hi

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return bool(np.all(self.lo == other.lo) and np.all(self.hi == other.hi))

    def __hash__(self):
        return hash((np.asarray(self.lo).tobytes(), np.asarray(self.hi).tobytes()))

    def __repr__(self):
        if np.ndim(self.lo) == 0:
            return f"Interval({self.lo!r}, {self.hi!r})"
        return f"Interval(lo={self.lo!r}, hi={self.hi!r})"


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _prod_bounds(x, y):
    """Outward bounds of one product; exact only when a factor is exactly 0."""
    p = x * y
    exact = (x == 0.0) | (y == 0.0)
    return np.where(exact, p, _down(p)), np.where(exact, p, _up(p))


def from_fraction(lo: Fraction, hi: Fraction | None = None) -> Interval:
    """Tightest binary interval enclosing exact rationals ``[lo, hi]``."""
    hi = lo if hi is None else hi
    if lo > hi:
        raise IntervalDomainError(f"empty interval: {lo} > {hi}")
    return Interval(_exact_down(Fraction(lo)), _exact_up(Fraction(hi)))


def from_decimal(text, text_hi=None) -> Interval:
    """Tightest binary interval enclosing a decimal literal (or a pair)."""
    lo = Fraction(str(text))
    hi = lo if text_hi is None else Fraction(str(text_hi))
    if lo > hi:
        raise IntervalDomainError(f"empty interval: {text} > {text_hi}")
    return Interval(_exact_down(lo), _exact_up(hi))


def fmt_interval(iv: Interval) -> str:
    """Decimal text that round-trips the exact binary bounds."""
    return f"[{float(iv.lo)!r}, {float(iv.hi)!r}]"


class IntervalBox:
    """A product of intervals stored as two float arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = np.array(lo, dtype=float, ndmin=1)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float, ndmin=1)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise IntervalDomainError("box bounds must be equal-length vectors")
        _check_finite(lo, hi)
        if np.any(lo > hi):
            raise IntervalDomainError("empty box: some lo > hi")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_intervals(cls, ivs) -> "IntervalBox":
        return cls([float(i.lo) for i in ivs], [float(i.hi) for i in ivs])

    @property
    def dim(self) -> int:
        return self.lo.size

    def __len__(self):
        return self.dim

    def __getitem__(self, k) -> Interval:
        return Interval(self.lo[k], self.hi[k])

    def intervals(self):
        return [self[k] for k in range(self.dim)]

    def width(self):
        return _up(self.hi - self.lo)

    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    def contains(self, other) -> bool:
        if isinstance(other, IntervalBox):
            return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))
        p = np.asarray(other, float)
        return bool(np.all(self.lo <= p) and np.all(p <= self.hi))

    def interior_contains(self, other: "IntervalBox") -> bool:
        return bool(np.all(self.lo < other.lo) and np.all(other.hi < self.hi))

    def overlaps(self, other: "IntervalBox") -> bool:
        return bool(np.all(self.lo <= other.hi) and np.all(other.lo <= self.hi))

    def hull(self, other: "IntervalBox") -> "IntervalBox":
        return IntervalBox(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def inflate(self, r) -> "IntervalBox":
        return IntervalBox(_down(self.lo - r), _up(self.hi + r))

    def __eq__(self, other):
        if not isinstance(other, IntervalBox):
            return NotImplemented
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def __repr__(self):
        parts = ", ".join(f"[{l:.17g}, {h:.17g}]" for l, h in zip(self.lo, self.hi))
        return f"IntervalBox({parts})"


# -- complex intervals as (re, im) pairs -------------------------------------------

def cadd(z, w):
    return (z[0] + w[0], z[1] + w[1])


def csub(z, w):
    return (z[0] - w[0], z[1] - w[1])


def cmul(z, w):
    zr, zi = Interval._coerce(z[0]), Interval._coerce(z[1])
    wr, wi = Interval._coerce(w[0]), Interval._coerce(w[1])
    return (zr * wr - zi * wi, zr * wi + zi * wr)


def csqr(z):
    zr, zi = Interval._coerce(z[0]), Interval._coerce(z[1])
    return (zr.sqr() - zi.sqr(), 2.0 * (zr * zi))


# -- compiled scalar kernels --------------------------------------------------------
# Each returns (lo, hi).  Overflow is reported by the callers through isfinite
# checks on the final image box, which is cheaper than checking every step.

@njit(cache=True, inline="always")
def dn(x):
    return np.nextafter(x, -np.inf)


@njit(cache=True, inline="always")
def up(x):
    return np.nextafter(x, np.inf)


@njit(cache=True, inline="always")
def iadd(alo, ahi, blo, bhi):
    return dn(alo + blo), up(ahi + bhi)


@njit(cache=True, inline="always")
def isub(alo, ahi, blo, bhi):
    return dn(alo - bhi), up(ahi - blo)


@njit(cache=True, inline="always")
def _pdn(x, y):
    p = x * y
    if x == 0.0 or y == 0.0:
        return p
    return dn(p)


@njit(cache=True, inline="always")
def _pup(x, y):
    p = x * y
    if x == 0.0 or y == 0.0:
        return p
    return up(p)


@njit(cache=True, inline="always")
def imul(alo, ahi, blo, bhi):
    lo = min(min(_pdn(alo, blo), _pdn(alo, bhi)), min(_pdn(ahi, blo), _pdn(ahi, bhi)))
    hi = max(max(_pup(alo, blo), _pup(alo, bhi)), max(_pup(ahi, blo), _pup(ahi, bhi)))
    return lo, hi


@njit(cache=True, inline="always")
def isqr(alo, ahi):
    hi = max(_pup(alo, alo), _pup(ahi, ahi))
    if alo <= 0.0 <= ahi:
        lo = 0.0
    else:
        m = min(abs(alo), abs(ahi))
        lo = max(_pdn(m, m), 0.0)
    return lo, hi


@njit(cache=True, inline="always")
def iscale(s, alo, ahi):
    """Exact-scalar times interval."""
    if s >= 0.0:
        return _pdn(s, alo), _pup(s, ahi)
    return _pdn(s, ahi), _pup(s, alo)
