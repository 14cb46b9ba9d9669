"""The Hénon family ``H(x, y) = (x**2 + c - a*y, x)`` as rigorous box maps.

Real mode works on boxes ``(x, y)``; complex mode on ``(Re x, Im x, Re y, Im y)``.
Parameters are boxes too: every image encloses the union over all parameters
in the box, which is what the continuation and sweep code relies on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from .interval import (
    Interval,
    IntervalBox,
    IntervalDivisionError,
    IntervalDomainError,
    IntervalOverflowError,
    from_decimal,
    iadd,
    imul,
    iscale,
    isqr,
    isub,
)

REAL = "real"
COMPLEX = "complex"

# 5 + 2*sqrt(5), enclosed.
_DN_CONST = Interval(5.0) + 2.0 * Interval(5.0).sqrt()


class Tri(enum.Enum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


def _as_interval(v) -> Interval:
    if isinstance(v, Interval):
        return v
    if isinstance(v, str):
        return from_decimal(v)
    if isinstance(v, tuple):
        lo, hi = v
        if isinstance(lo, str) or isinstance(hi, str):
            return from_decimal(lo, hi)
        return Interval(lo, hi)
    return Interval(float(v))


def _split_complex(v):
    """Accepts a number, decimal string, Interval, (lo, hi) or complex."""
    if isinstance(v, complex):
        return Interval(v.real), Interval(v.imag)
    if isinstance(v, list) and len(v) == 2:
        return _as_interval(v[0]), _as_interval(v[1])
    return _as_interval(v), Interval(0.0)


@dataclass(frozen=True)
class Param:
    """A box of Hénon parameters ``a = a_re + i a_im``, ``c = c_re + i c_im``."""

    a_re: Interval
    a_im: Interval
    c_re: Interval
    c_im: Interval
    mode: str = REAL

    def __post_init__(self):
        if self.mode not in (REAL, COMPLEX):
            raise ValueError(f"mode must be 'real' or 'complex', got {self.mode!r}")
        if self.mode == REAL:
            for iv in (self.a_im, self.c_im):
                if not (iv.lo == 0.0 and iv.hi == 0.0):
                    raise IntervalDomainError("real-mode parameters need Im a = Im c = [0, 0]")
        if self.a_re.contains_zero() and self.a_im.contains_zero():
            raise IntervalDivisionError("parameter box contains a = 0 (map not invertible)")

    @classmethod
    def make(cls, a, c, mode: str = REAL) -> "Param":
        """Build from numbers, decimal strings, ``(lo, hi)`` pairs or complex values.

        A two-element list ``[re, im]`` is read as real and imaginary parts.
        """
        a_re, a_im = _split_complex(a)
        c_re, c_im = _split_complex(c)
        if mode == REAL and not (a_im.hi == a_im.lo == 0 and c_im.hi == c_im.lo == 0):
            mode = COMPLEX
        return cls(a_re, a_im, c_re, c_im, mode)

    def with_mode(self, mode: str) -> "Param":
        return Param(self.a_re, self.a_im, self.c_re, self.c_im, mode)

    @property
    def dim(self) -> int:
        return 2 if self.mode == REAL else 4

    @property
    def is_real(self) -> bool:
        return (self.a_im.lo == self.a_im.hi == 0.0) and (self.c_im.lo == self.c_im.hi == 0.0)

    def abs_a(self) -> Interval:
        return (self.a_re.sqr() + self.a_im.sqr()).sqrt()

    def abs_c(self) -> Interval:
        return (self.c_re.sqr() + self.c_im.sqr()).sqrt()

    def inv_a(self):
        """Enclosure of ``1/a`` as a (re, im) pair of intervals."""
        n2 = self.a_re.sqr() + self.a_im.sqr()
        if n2.lo <= 0.0:
            raise IntervalDivisionError("|a|^2 interval reaches 0")
        r = n2.reciprocal()
        return self.a_re * r, -(self.a_im * r)

    def kernel_array(self) -> np.ndarray:
        """Packed bounds for the compiled kernels: a, c, 1/a (re/im lo/hi)."""
        ir, ii = self.inv_a()
        vals = [self.a_re, self.a_im, self.c_re, self.c_im, ir, ii]
        out = np.empty(12)
        for k, iv in enumerate(vals):
            out[2 * k] = iv.lo
            out[2 * k + 1] = iv.hi
        return out

    def mid_point(self):
        """Floating-point representative ``(a, c)`` as complex numbers."""
        a = complex(float(self.a_re.mid()), float(self.a_im.mid()))
        c = complex(float(self.c_re.mid()), float(self.c_im.mid()))
        return a, c

    def box(self) -> IntervalBox:
        return IntervalBox.from_intervals([self.a_re, self.a_im, self.c_re, self.c_im])

    def __str__(self):
        def f(iv):
            if iv.lo == iv.hi:
                return f"{iv.lo:.17g}"
            return f"[{iv.lo:.17g},{iv.hi:.17g}]"
        return f"a={f(self.a_re)}+{f(self.a_im)}i c={f(self.c_re)}+{f(self.c_im)}i ({self.mode})"


def conj_param(p: Param) -> Param:
    return Param(p.a_re, -p.a_im, p.c_re, -p.c_im, p.mode)


# -- compiled kernels ---------------------------------------------------------------

@njit(cache=True)
def _fwd_real(lo, hi, prm, olo, ohi):
    for i in range(lo.shape[0]):
        x2 = isqr(lo[i, 0], hi[i, 0])
        ay = imul(prm[0], prm[1], lo[i, 1], hi[i, 1])
        s = iadd(x2[0], x2[1], prm[4], prm[5])
        r = isub(s[0], s[1], ay[0], ay[1])
        olo[i, 0] = r[0]
        ohi[i, 0] = r[1]
        olo[i, 1] = lo[i, 0]
        ohi[i, 1] = hi[i, 0]


@njit(cache=True, inline="always")
def _cmul(ar_lo, ar_hi, ai_lo, ai_hi, br_lo, br_hi, bi_lo, bi_hi):
    p = imul(ar_lo, ar_hi, br_lo, br_hi)
    q = imul(ai_lo, ai_hi, bi_lo, bi_hi)
    r = imul(ar_lo, ar_hi, bi_lo, bi_hi)
    s = imul(ai_lo, ai_hi, br_lo, br_hi)
    re = isub(p[0], p[1], q[0], q[1])
    im = iadd(r[0], r[1], s[0], s[1])
    return re[0], re[1], im[0], im[1]


@njit(cache=True, inline="always")
def _csqr(xr_lo, xr_hi, xi_lo, xi_hi):
    a = isqr(xr_lo, xr_hi)
    b = isqr(xi_lo, xi_hi)
    re = isub(a[0], a[1], b[0], b[1])
    m = imul(xr_lo, xr_hi, xi_lo, xi_hi)
    im = iscale(2.0, m[0], m[1])
    return re[0], re[1], im[0], im[1]


@njit(cache=True)
def _fwd_complex(lo, hi, prm, olo, ohi):
    for i in range(lo.shape[0]):
        s = _csqr(lo[i, 0], hi[i, 0], lo[i, 1], hi[i, 1])
        ay = _cmul(prm[0], prm[1], prm[2], prm[3], lo[i, 2], hi[i, 2], lo[i, 3], hi[i, 3])
        re = iadd(s[0], s[1], prm[4], prm[5])
        re = isub(re[0], re[1], ay[0], ay[1])
        im = iadd(s[2], s[3], prm[6], prm[7])
        im = isub(im[0], im[1], ay[2], ay[3])
        olo[i, 0] = re[0]
        ohi[i, 0] = re[1]
        olo[i, 1] = im[0]
        ohi[i, 1] = im[1]
        olo[i, 2] = lo[i, 0]
        ohi[i, 2] = hi[i, 0]
        olo[i, 3] = lo[i, 1]
        ohi[i, 3] = hi[i, 1]


@njit(cache=True)
def _inv_real(lo, hi, prm, olo, ohi):
    # (u, v) -> (v, (v^2 + c - u) / a)
    for i in range(lo.shape[0]):
        v2 = isqr(lo[i, 1], hi[i, 1])
        s = iadd(v2[0], v2[1], prm[4], prm[5])
        s = isub(s[0], s[1], lo[i, 0], hi[i, 0])
        r = imul(s[0], s[1], prm[8], prm[9])
        olo[i, 0] = lo[i, 1]
        ohi[i, 0] = hi[i, 1]
        olo[i, 1] = r[0]
        ohi[i, 1] = r[1]


@njit(cache=True)
def _inv_complex(lo, hi, prm, olo, ohi):
    for i in range(lo.shape[0]):
        s = _csqr(lo[i, 2], hi[i, 2], lo[i, 3], hi[i, 3])
        re = iadd(s[0], s[1], prm[4], prm[5])
        re = isub(re[0], re[1], lo[i, 0], hi[i, 0])
        im = iadd(s[2], s[3], prm[6], prm[7])
        im = isub(im[0], im[1], lo[i, 1], hi[i, 1])
        q = _cmul(re[0], re[1], im[0], im[1], prm[8], prm[9], prm[10], prm[11])
        olo[i, 0] = lo[i, 2]
        ohi[i, 0] = hi[i, 2]
        olo[i, 1] = lo[i, 3]
        ohi[i, 1] = hi[i, 3]
        olo[i, 2] = q[0]
        ohi[i, 2] = q[1]
        olo[i, 3] = q[2]
        ohi[i, 3] = q[3]


@njit(cache=True)
def _fiber_real(blo, bhi, flo, fhi, prm, olo, ohi):
    # v1' = 2x v1 - a v2, v2' = v1; base box row i, fiber box row i
    for i in range(blo.shape[0]):
        tx = iscale(2.0, blo[i, 0], bhi[i, 0])
        p = imul(tx[0], tx[1], flo[i, 0], fhi[i, 0])
        q = imul(prm[0], prm[1], flo[i, 1], fhi[i, 1])
        r = isub(p[0], p[1], q[0], q[1])
        olo[i, 0] = r[0]
        ohi[i, 0] = r[1]
        olo[i, 1] = flo[i, 0]
        ohi[i, 1] = fhi[i, 0]


@njit(cache=True)
def _fiber_complex(blo, bhi, flo, fhi, prm, olo, ohi):
    for i in range(blo.shape[0]):
        txr = iscale(2.0, blo[i, 0], bhi[i, 0])
        txi = iscale(2.0, blo[i, 1], bhi[i, 1])
        p = _cmul(txr[0], txr[1], txi[0], txi[1], flo[i, 0], fhi[i, 0], flo[i, 1], fhi[i, 1])
        q = _cmul(prm[0], prm[1], prm[2], prm[3], flo[i, 2], fhi[i, 2], flo[i, 3], fhi[i, 3])
        re = isub(p[0], p[1], q[0], q[1])
        im = isub(p[2], p[3], q[2], q[3])
        olo[i, 0] = re[0]
        ohi[i, 0] = re[1]
        olo[i, 1] = im[0]
        ohi[i, 1] = im[1]
        olo[i, 2] = flo[i, 0]
        ohi[i, 2] = fhi[i, 0]
        olo[i, 3] = flo[i, 1]
        ohi[i, 3] = fhi[i, 1]


def _check(olo, ohi):
    if not (np.all(np.isfinite(olo)) and np.all(np.isfinite(ohi))):
        raise IntervalOverflowError("Hénon image overflowed")
    return olo, ohi


def _dims_for(p: Param, d: int):
    expected = p.dim
    if d != expected:
        raise ValueError(f"{p.mode} mode expects boxes of dimension {expected}, got {d}")


class HenonBoxMap:
    """Vectorized forward (or inverse) map on arrays of boxes ``(N, dim)``.

    This is the box-map protocol consumed by :func:`horseshoe.cubical.build_graph`.
    """

    def __init__(self, p: Param, inverse: bool = False):
        self.param = p
        self.inverse = inverse
        self.dim = p.dim
        self._prm = p.kernel_array()
        if p.mode == REAL:
            self._kernel = _inv_real if inverse else _fwd_real
        else:
            self._kernel = _inv_complex if inverse else _fwd_complex

    def __call__(self, lo: np.ndarray, hi: np.ndarray):
        lo = np.ascontiguousarray(lo, dtype=float)
        hi = np.ascontiguousarray(hi, dtype=float)
        olo = np.empty_like(lo)
        ohi = np.empty_like(hi)
        self._kernel(lo, hi, self._prm, olo, ohi)
        return _check(olo, ohi)


class TangentFiberMap:
    """Enclosure of ``DH(base) @ fiber`` for paired arrays of base and fiber boxes."""

    def __init__(self, p: Param):
        self.param = p
        self._prm = p.kernel_array()
        self._kernel = _fiber_real if p.mode == REAL else _fiber_complex

    def __call__(self, blo, bhi, flo, fhi):
        olo = np.empty_like(flo, dtype=float)
        ohi = np.empty_like(fhi, dtype=float)
        self._kernel(np.ascontiguousarray(blo, float), np.ascontiguousarray(bhi, float),
                     np.ascontiguousarray(flo, float), np.ascontiguousarray(fhi, float),
                     self._prm, olo, ohi)
        return _check(olo, ohi)


def _box_rows(z: IntervalBox):
    return z.lo[None, :], z.hi[None, :]


def eval_fwd(p: Param, z: IntervalBox) -> IntervalBox:
    """Enclosure of ``{H_{a,c}(z) : z in box, (a, c) in p}``."""
    _dims_for(p, z.dim)
    lo, hi = HenonBoxMap(p)(*_box_rows(z))
    return IntervalBox(lo[0], hi[0])


def eval_inv(p: Param, z: IntervalBox) -> IntervalBox:
    """Enclosure of the inverse image ``(u, v) -> (v, (v**2 + c - u) / a)``."""
    _dims_for(p, z.dim)
    lo, hi = HenonBoxMap(p, inverse=True)(*_box_rows(z))
    return IntervalBox(lo[0], hi[0])


def jacobian(p: Param, z: IntervalBox):
    """Entrywise enclosure of ``DH = [[2x, -a], [1, 0]]``.

    Returns a 2x2 nested list of complex intervals ``(re, im)``.
    """
    _dims_for(p, z.dim)
    if p.mode == REAL:
        x_re, x_im = z[0], Interval(0.0)
    else:
        x_re, x_im = z[0], z[1]
    one = (Interval(1.0), Interval(0.0))
    zero = (Interval(0.0), Interval(0.0))
    return [[(2.0 * x_re, 2.0 * x_im), (-p.a_re, -p.a_im)], [one, zero]]


def det_jacobian(p: Param, z: IntervalBox):
    """Enclosure of ``det DH`` via its cofactor expansion ``2x*0 - (-a)*1``."""
    J = jacobian(p, z)
    (j00r, j00i), (j01r, j01i) = J[0]
    (j10r, j10i), (j11r, j11i) = J[1]
    d1r = j00r * j11r - j00i * j11i
    d1i = j00r * j11i + j00i * j11r
    d2r = j01r * j10r - j01i * j10i
    d2i = j01r * j10i + j01i * j10r
    return d1r - d2r, d1i - d2i


def tangent_fwd(p: Param, base: IntervalBox, fiber: IntervalBox):
    """Tangent map on one (base, fiber) box pair."""
    _dims_for(p, base.dim)
    if fiber.dim != base.dim:
        raise ValueError("fiber dimension must match the phase-space dimension")
    flo, fhi = TangentFiberMap(p)(base.lo[None, :], base.hi[None, :],
                                  fiber.lo[None, :], fiber.hi[None, :])
    return eval_fwd(p, base), IntervalBox(flo[0], fhi[0])


def radius_R(p: Param) -> Interval:
    """Trapping radius ``(1 + |a| + sqrt((1 + |a|)**2 + 4|c|)) / 2``."""
    s = 1.0 + p.abs_a()
    disc = s.sqr() + 4.0 * p.abs_c()
    return (s + disc.sqrt()) * 0.5


def trap_box(p: Param) -> IntervalBox:
    r = float(radius_R(p).hi)
    return IntervalBox(np.full(p.dim, -r), np.full(p.dim, r))


def _tri(yes: bool, no: bool) -> Tri:
    if yes:
        return Tri.YES
    if no:
        return Tri.NO
    return Tri.INDETERMINATE


def _real_part_status(p: Param):
    """(certainly real, certainly not real) for the parameter box."""
    certainly_real = p.a_im.lo == p.a_im.hi == 0.0 and p.c_im.lo == p.c_im.hi == 0.0
    certainly_not = (not p.a_im.contains_zero()) or (not p.c_im.contains_zero())
    return certainly_real, certainly_not


def in_DN(p: Param) -> Tri:
    """``c < -(5 + 2 sqrt 5)(|a| + 1)**2 / 4`` with real ``a != 0``."""
    real, not_real = _real_part_status(p)
    thr = -(_DN_CONST * (abs(p.a_re) + 1.0).sqr()) * 0.25
    a_nonzero = not p.a_re.contains_zero()
    yes = real and a_nonzero and bool(p.c_re.certainly_lt(thr))
    no = not_real or bool(p.c_re.lo >= thr.hi) or (p.a_re.lo == p.a_re.hi == 0.0)
    return _tri(yes, no)


def in_HOV(p: Param) -> Tri:
    """``|c| > 2(|a| + 1)**2`` with ``a != 0``."""
    thr = 2.0 * (p.abs_a() + 1.0).sqr()
    ac = p.abs_c()
    yes = bool(ac.certainly_gt(thr))
    no = bool(ac.hi <= thr.lo)
    return _tri(yes, no)


def in_EMP(p: Param) -> Tri:
    """Real ``(a, c)`` with ``c > (|a| + 1)**2 / 4``."""
    real, not_real = _real_part_status(p)
    thr = (abs(p.a_re) + 1.0).sqr() * 0.25
    yes = real and bool(p.c_re.certainly_gt(thr))
    no = not_real or bool(p.c_re.hi <= thr.lo)
    return _tri(yes, no)


def region_tag(p: Param) -> str:
    """One of ``DN``, ``HOV``, ``EMP`` or ``NONE`` for a point parameter.

    DN takes precedence over HOV (the regions overlap); EMP before HOV.
    """
    if in_DN(p) is Tri.YES:
        return "DN"
    if in_EMP(p) is Tri.YES:
        return "EMP"
    if in_HOV(p) is Tri.YES:
        return "HOV"
    return "NONE"


# -- floating point helpers (non-rigorous, used for seeding and diagnostics) ------

def henon_point(a: complex, c: complex, x, y):
    return x * x + c - a * y, x


def henon_point_inv(a: complex, c: complex, u, v):
    return v, (v * v + c - u) / a


def fixed_points(a: complex, c: complex):
    """Both fixed points ``x = y`` roots of ``x**2 - (1 + a) x + c = 0``."""
    b = 1.0 + a
    disc = np.sqrt(complex(b * b - 4.0 * c))
    return (b - disc) / 2.0, (b + disc) / 2.0
