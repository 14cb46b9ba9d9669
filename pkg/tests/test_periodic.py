"""Krawczyk certificates for periodic orbits and real periodic-point counts."""
from decimal import Decimal, getcontext

import numpy as np
import pytest

from horseshoe.henon import COMPLEX, Param
from horseshoe.periodic import (
    Certificate, certify, count_real, crosscheck_pruning, find_seeds, load_certificates,
    orbit_closure_meets, save_certificates,
)
from horseshoe.shift import SFT

getcontext().prec = 50


def inside(value: Decimal, lo: float, hi: float) -> bool:
    return Decimal(lo) <= value <= Decimal(hi)


def test_seeds_fixed_points():
    seeds = find_seeds(Param.make(1, -10), 1)
    xs = sorted(float(s[0]) for s in seeds)
    assert np.allclose(xs, [1 - np.sqrt(11), 1 + np.sqrt(11)])


@pytest.mark.parametrize("a,c,n,count", [(1, -10, 3, 8), (1, "-5.4", 5, 22)])
def test_seed_counts(a, c, n, count):
    assert len(find_seeds(Param.make(a, c), n)) == count


def test_certify_fixed_points_exact():
    # x^2 - 2x - 10 = 0 at (a, c) = (1, -10)
    p = Param.make(1, -10)
    roots = [1 + Decimal(11).sqrt(), 1 - Decimal(11).sqrt()]
    for r in roots:
        cert = certify(p, np.array([float(r)]))
        assert cert is not None and cert.mode == "real"
        assert inside(r, cert.box.lo[0], cert.box.hi[0])
        # strict inclusion of the operator image
        assert np.all(cert.box.lo < cert.image.lo) and np.all(cert.image.hi < cert.box.hi)


def test_certify_period_two_exact():
    # period-2 points solve t^2 + (1+a) t + (1+a)^2 + c = 0, here t = -1 ± sqrt 7
    p = Param.make(1, -10)
    r1, r2 = -1 + Decimal(7).sqrt(), -1 - Decimal(7).sqrt()
    cert = certify(p, np.array([float(r1), float(r2)]))
    assert cert is not None
    assert inside(r1, cert.box.lo[0], cert.box.hi[0]) and inside(r2, cert.box.lo[1], cert.box.hi[1])
    assert orbit_closure_meets(p, cert)


def test_certify_rejects_nonsolution():
    assert certify(Param.make(1, -10), np.array([0.3, -2.0])) is None


def test_nonreal_fixed_points_in_emp_hov():
    # a = 1, c = 10: both fixed points are nonreal
    rep = count_real(Param.make(1, 10), 1)
    assert rep.exact and rep.lower_real == 0
    nonreal = [c for c in rep.certificates if c.mode == "nonreal"]
    assert len(nonreal) == 2 and all(c.is_nonreal() for c in nonreal)
    # exact roots 1 ± 3i
    got = sorted((float(c.box.lo[1]) + float(c.box.hi[1])) / 2 for c in nonreal)
    assert np.allclose(got, [-3, 3])
    for c in nonreal:
        im = Decimal(3) if c.box.lo[1] > 0 else Decimal(-3)
        assert inside(Decimal(1), c.box.lo[0], c.box.hi[0]) and inside(im, c.box.lo[1], c.box.hi[1])


def test_count_dn_full_horseshoe():
    rep = count_real(Param.make(1, -10), 5)
    assert rep.exact and rep.value == 32


def test_certificates_disjoint_paired_and_closed():
    p = Param.make(1, "-5.4")
    rep = count_real(p, 4)
    assert rep.lower_real <= rep.upper_real
    assert rep.exact and rep.value == 16
    certs = rep.certificates
    boxes = [c.as_complex_box() for c in certs]
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            assert not boxes[i].overlaps(boxes[j])
    nonreal = [c for c in certs if c.mode == "nonreal"]
    keys = {tuple(c.box.lo) + tuple(c.box.hi) for c in nonreal}
    for c in nonreal:
        twin = c.conjugate()
        assert tuple(twin.box.lo) + tuple(twin.box.hi) in keys
        assert twin.conjugate().box.lo.tolist() == c.box.lo.tolist()
    for c in certs:
        q = p if c.mode == "real" else p.with_mode(COMPLEX)
        assert orbit_closure_meets(q, c)


def test_crosscheck_full_shift_dn():
    chk = crosscheck_pruning(Param.make(1, -10), SFT(), range(3, 6))
    assert chk.passed and chk.verdict == "pass"
    assert [r[1] for r in chk.rows] == [8, 16, 32]


def test_certificate_round_trip(tmp_path):
    rep = count_real(Param.make(1, -10), 2)
    path = tmp_path / "certs.json"
    save_certificates([rep], path)
    (back,) = load_certificates(path)
    assert (back.n, back.lower_real, back.upper_real) == (2, 4, 4)
    for c, d in zip(rep.certificates, back.certificates):
        assert isinstance(d, Certificate)
        assert c.box.lo.tolist() == d.box.lo.tolist() and c.box.hi.tolist() == d.box.hi.tolist()
