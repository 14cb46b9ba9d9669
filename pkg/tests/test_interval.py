"""Interval arithmetic: every result must contain the exact rational value."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from numba import njit

from horseshoe.interval import (
    Interval,
    IntervalBox,
    IntervalDivisionError,
    IntervalDomainError,
    cmul,
    csqr,
    from_decimal,
    from_fraction,
    imul,
    isqr,
    iscale,
)

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)
tiny = st.floats(min_value=-1e-300, max_value=1e-300, allow_nan=False)
mixed = st.one_of(finite, tiny, st.sampled_from([0.0, -0.0, 1.0, -1.0, 5e-324, -5e-324]))


def ivs(elems=mixed):
    return st.tuples(elems, elems).map(lambda t: Interval(min(t), max(t)))


def encloses(iv: Interval, exact: Fraction) -> bool:
    return Fraction(iv.lo) <= exact <= Fraction(iv.hi)


def corners(x: Interval, y: Interval):
    return [Fraction(a) for a in (x.lo, x.hi)], [Fraction(b) for b in (y.lo, y.hi)]


@given(ivs(), ivs())
def test_add_sub_enclose_exact_endpoints(x, y):
    (a0, a1), (b0, b1) = corners(x, y)
    s, d = x + y, x - y
    assert encloses(s, a0 + b0) and encloses(s, a1 + b1)
    assert encloses(d, a0 - b1) and encloses(d, a1 - b0)


@given(ivs(), ivs())
def test_mul_encloses_all_corner_products(x, y):
    (a0, a1), (b0, b1) = corners(x, y)
    p = x * y
    for a in (a0, a1):
        for b in (b0, b1):
            assert encloses(p, a * b)


@given(ivs())
def test_sqr_encloses_and_is_nonnegative(x):
    a0, a1 = Fraction(x.lo), Fraction(x.hi)
    s = x.sqr()
    assert s.lo >= 0.0
    assert encloses(s, a0 * a0) and encloses(s, a1 * a1)
    if x.lo <= 0.0 <= x.hi:
        assert s.lo == 0.0


def test_underflowing_product_is_not_treated_as_exact():
    # 1e-200 * 1e-200 rounds to 0 but is positive
    p = Interval(1e-200) * Interval(1e-200)
    assert p.lo <= 0.0 < p.hi
    q = Interval(-1e-200) * Interval(1e-200)
    assert q.lo < 0.0 <= q.hi
    s = Interval(1e-200).sqr()
    assert s.hi > 0.0


def test_zero_factor_stays_exact():
    assert Interval(0.0) * Interval(3.0, 7.0) == Interval(0.0)
    assert Interval(2.0) * Interval(0.0) == Interval(0.0)


away = st.one_of(st.floats(min_value=1e-6, max_value=1e12), st.floats(min_value=-1e12, max_value=-1e-6))


@given(ivs(finite), ivs(away))
def test_div_encloses(x, y):
    assume(not y.contains_zero())
    (a0, a1), (b0, b1) = corners(x, y)
    q = x / y
    for a in (a0, a1):
        for b in (b0, b1):
            assert encloses(q, a / b)


def test_division_by_zero_interval_raises():
    with pytest.raises(IntervalDivisionError):
        Interval(1.0) / Interval(-1.0, 1.0)


@given(st.floats(min_value=0.0, max_value=1e300, allow_nan=False))
def test_sqrt_encloses(v):
    r = Interval(v).sqrt()
    assert Fraction(r.lo) ** 2 <= Fraction(v) <= Fraction(r.hi) ** 2


def test_sqrt_of_negative_raises():
    with pytest.raises(IntervalDomainError):
        Interval(-2.0, -1.0).sqrt()


@pytest.mark.parametrize("text", ["0.1", "-5.4", "1e-30", "-5.46875", "3.14159265358979323846"])
def test_from_decimal_is_tight_and_enclosing(text):
    exact = Fraction(text)
    iv = from_decimal(text)
    assert encloses(iv, exact)
    # dyadic literals are exact, others span one ulp
    if exact == Fraction(float(exact)):
        assert iv.lo == iv.hi
    else:
        assert np.nextafter(iv.lo, np.inf) == iv.hi


def test_from_fraction_orders_and_rejects_empty():
    iv = from_fraction(Fraction(1, 3), Fraction(2, 3))
    assert encloses(iv, Fraction(1, 3)) and encloses(iv, Fraction(2, 3))
    with pytest.raises(IntervalDomainError):
        from_fraction(Fraction(1), Fraction(0))


@given(ivs(finite), ivs(finite), ivs(finite), ivs(finite))
def test_complex_mul_encloses_point_products(xr, xi, yr, yi):
    zr, zi = cmul((xr, xi), (yr, yi))
    a, b = Fraction(xr.lo), Fraction(xi.lo)
    c, d = Fraction(yr.lo), Fraction(yi.lo)
    assert encloses(zr, a * c - b * d) and encloses(zi, a * d + b * c)
    sr, si = csqr((xr, xi))
    assert encloses(sr, a * a - b * b) and encloses(si, 2 * a * b)


@njit
def _kernel_mul(a0, a1, b0, b1):
    return imul(a0, a1, b0, b1)


@njit
def _kernel_sqr(a0, a1):
    return isqr(a0, a1)


@njit
def _kernel_scale(s, a0, a1):
    return iscale(s, a0, a1)


@given(ivs(), ivs())
def test_compiled_kernels_agree_with_exact_corners(x, y):
    lo, hi = _kernel_mul(x.lo, x.hi, y.lo, y.hi)
    (a0, a1), (b0, b1) = corners(x, y)
    for a in (a0, a1):
        for b in (b0, b1):
            assert Fraction(lo) <= a * b <= Fraction(hi)
    slo, shi = _kernel_sqr(x.lo, x.hi)
    assert slo >= 0.0 and Fraction(shi) >= max(a0 * a0, a1 * a1)
    klo, khi = _kernel_scale(y.lo, x.lo, x.hi)
    assert Fraction(klo) <= b0 * a0 <= Fraction(khi)
    assert Fraction(klo) <= b0 * a1 <= Fraction(khi)


def test_compiled_kernels_handle_underflow():
    lo, hi = _kernel_mul(1e-200, 1e-200, 1e-200, 1e-200)
    assert lo <= 0.0 < hi
    lo, hi = _kernel_sqr(-1e-200, -1e-200)
    assert lo == 0.0 and hi > 0.0


def test_box_containment_and_hull():
    a = IntervalBox([0.0, 0.0], [1.0, 1.0])
    b = IntervalBox([0.25, 0.25], [0.5, 0.5])
    assert a.contains(b) and not b.contains(a)
    assert a.interior_contains(b)
    h = b.hull(IntervalBox([2.0, -1.0], [3.0, 0.0]))
    assert h == IntervalBox([0.25, -1.0], [3.0, 0.5])
