"""Certified periodic orbits and counts of real periodic points.

A period-``n`` point ``(x_0, y_0)`` of ``H(x, y) = (x^2 + c - a y, x)`` is the
same thing as a cyclic solution of

    F_i(x) = x_{i+1} - x_i^2 - c + a x_{i-1} = 0,   i mod n,

with ``y_0 = x_{n-1}``.  Each solution is certified by the Krawczyk operator,
in ``n`` real unknowns for real points or in ``2n`` real unknowns (real and
imaginary parts) for nonreal ones.  The strict inclusion ``K(X) ⊂ int X``
proves that ``X`` holds exactly one solution.

Counting uses that ``H^n`` has exactly ``2^n`` fixed points in ``C^2`` counted
with multiplicity, so certified nonreal points bound the real ones from above.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .henon import COMPLEX, REAL, Param, eval_fwd
from .interval import Interval, IntervalBox
from .shift import SFT, count_fixed

__all__ = [
    "Certificate",
    "CountReport",
    "PruningCheck",
    "find_seeds",
    "track_all",
    "certify",
    "count_real",
    "crosscheck_pruning",
    "save_certificates",
    "load_certificates",
    "orbit_closure_meets",
]

_INFLATIONS = (1e-12, 1e-10, 1e-8, 1e-6, 1e-4)


# -- floating point system and path tracking ------------------------------------------

def _F(x, a, c):
    return np.roll(x, -1, axis=-1) - x * x - c + a * np.roll(x, 1, axis=-1)


def _J(x, a):
    B, n = x.shape
    M = np.zeros((B, n, n), dtype=x.dtype)
    i = np.arange(n)
    M[:, i, (i + 1) % n] += 1.0
    M[:, i, i] += -2.0 * x
    M[:, i, (i - 1) % n] += a
    return M


def _newton(x, a, c, iters):
    for _ in range(iters):
        try:
            dx = np.linalg.solve(_J(x, a), _F(x, a, c)[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        x = x - dx
    return x


def _track(a, c, n, c0, bend, steps):
    """Follow all ``2^n`` solutions from the anti-integrable end ``c0`` to ``c``."""
    signs = np.array(list(itertools.product([-1.0, 1.0], repeat=n)))
    x = _newton((signs * np.sqrt(-c0 + 0j)).astype(complex), a, c0, 30)
    ts = np.linspace(0.0, 1.0, steps + 1)[1:]
    prev = c0
    for t in ts:
        cc = c0 + t * (c - c0) + 1j * bend * np.sin(np.pi * t)
        # Euler predictor: dx/dc = J^{-1} 1 since dF/dc = -1
        try:
            dxdc = np.linalg.solve(_J(x, a), np.ones(x.shape, dtype=complex)[..., None])[..., 0]
            x = x + dxdc * (cc - prev)
        except np.linalg.LinAlgError:
            pass
        x = _newton(x, a, cc, 3)
        prev = cc
    return _newton(x, a, c, 30)


def _dedupe(x, tol):
    keep = []
    for i in range(x.shape[0]):
        if not np.all(np.isfinite(x[i])):
            continue
        if all(np.max(np.abs(x[i] - x[j])) > tol for j in keep):
            keep.append(i)
    return x[keep]


def track_all(a: complex, c: complex, n: int, *, attempts: int = 6) -> np.ndarray:
    """All approximate solutions of the period-``n`` system, as ``(m, n)`` complex rows.

    Paths run from ``c0 = -30 (1 + |a|)^2``, where every sign pattern of
    ``±sqrt(-c0)`` continues to a solution, to ``c`` along arcs through the
    upper and lower half planes.  Results of several arcs are merged; the
    count is complete when it reaches ``2^n``.
    """
    c0 = -30.0 * (1.0 + abs(a)) ** 2
    scale = abs(c - c0) + 1.0
    found = np.zeros((0, n), dtype=complex)
    for k in range(attempts):
        bend = (0.15 + 0.1 * k) * scale * (1 if k % 2 == 0 else -1)
        x = _track(a, c, n, c0, bend, 200 * (k + 1))
        res = np.max(np.abs(_F(x, a, c)), axis=1)
        x = x[res < 1e-9 * (1.0 + np.max(np.abs(x), axis=1))]
        found = _dedupe(np.concatenate([found, x]), 1e-7)
        if found.shape[0] >= 2 ** n:
            break
    return found


def _is_real(x, tol=1e-8):
    return np.all(np.abs(x.imag) <= tol * (1.0 + np.abs(x.real)))


def find_seeds(p: Param, n: int, mode: str = REAL) -> list[np.ndarray]:
    """Newton-refined approximate period-``n`` points (one unfolded vector per point).

    Real mode keeps the real solutions; complex mode returns all of them,
    each conjugate pair ordered with the ``Im x_0 > 0`` member first.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    a, c = p.mid_point()
    xs = track_all(a, c, n)
    real = [x for x in xs if _is_real(x)]
    if mode == REAL:
        out = [_newton(x.real[None, :], a.real, c.real, 5)[0] for x in real]
        return sorted(out, key=lambda v: tuple(v))
    nonreal = [x for x in xs if not _is_real(x)]
    upper = [x for x in nonreal if x[np.argmax(np.abs(x.imag))].imag > 0]
    out = [x.real.astype(complex) for x in real]
    for x in sorted(upper, key=lambda v: (tuple(v.real), tuple(v.imag))):
        out.extend([x, np.conj(x)])
    return out


# -- interval evaluation -----------------------------------------------------------------

def _roll(X: Interval, k: int) -> Interval:
    return Interval._raw(np.roll(X.lo, k), np.roll(X.hi, k))


def _iv(v) -> Interval:
    v = np.asarray(v, dtype=float)
    return Interval._raw(v.copy(), v.copy())


def _zeros(shape) -> Interval:
    return Interval._raw(np.zeros(shape), np.zeros(shape))


def _set_add(M: Interval, i: int, j: int, v: Interval):
    s = Interval(M.lo[i, j], M.hi[i, j]) + v
    M.lo[i, j] = s.lo
    M.hi[i, j] = s.hi


def _sys_real(p: Param, X: Interval):
    """Interval residual and Jacobian of the real ``n``-form."""
    n = X.lo.shape[0]
    a, c = p.a_re, p.c_re
    Fv = _roll(X, -1) - X.sqr() - c + a * _roll(X, 1)
    J = _zeros((n, n))
    for i in range(n):
        _set_add(J, i, (i + 1) % n, Interval(1.0))
        _set_add(J, i, i, X[i] * -2.0)
        _set_add(J, i, (i - 1) % n, a)
    return Fv, J


def _sys_complex(p: Param, Z: Interval):
    """Residual and Jacobian of the ``2n`` real form, ``Z = (Re x, Im x)``."""
    n = Z.lo.shape[0] // 2
    U = Interval._raw(Z.lo[:n].copy(), Z.hi[:n].copy())
    V = Interval._raw(Z.lo[n:].copy(), Z.hi[n:].copy())
    ar, ai, cr, ci = p.a_re, p.a_im, p.c_re, p.c_im
    Up, Vp = _roll(U, 1), _roll(V, 1)
    re = _roll(U, -1) - (U.sqr() - V.sqr()) - cr + (ar * Up - ai * Vp)
    im = _roll(V, -1) - (U * V) * 2.0 - ci + (ar * Vp + ai * Up)
    Fv = Interval._raw(np.concatenate([re.lo, im.lo]), np.concatenate([re.hi, im.hi]))
    J = _zeros((2 * n, 2 * n))
    one = Interval(1.0)
    for i in range(n):
        nx, pv = (i + 1) % n, (i - 1) % n
        _set_add(J, i, nx, one)
        _set_add(J, i, i, U[i] * -2.0)
        _set_add(J, i, n + i, V[i] * 2.0)
        _set_add(J, i, pv, ar)
        _set_add(J, i, n + pv, -ai)
        _set_add(J, n + i, n + nx, one)
        _set_add(J, n + i, i, V[i] * -2.0)
        _set_add(J, n + i, n + i, U[i] * -2.0)
        _set_add(J, n + i, n + pv, ar)
        _set_add(J, n + i, pv, ai)
    return Fv, J


def _matvec(Y: np.ndarray, v: Interval) -> Interval:
    acc = _zeros(Y.shape[0])
    for k in range(Y.shape[1]):
        acc = acc + _iv(Y[:, k]) * v[k]
    return acc


def _matmat(Y: np.ndarray, M: Interval) -> Interval:
    acc = _zeros((Y.shape[0], M.lo.shape[1]))
    for k in range(Y.shape[1]):
        row = Interval._raw(M.lo[k:k + 1, :], M.hi[k:k + 1, :])
        acc = acc + _iv(Y[:, k:k + 1]) * row
    return acc


def _imatvec(M: Interval, v: Interval) -> Interval:
    acc = _zeros(M.lo.shape[0])
    for k in range(M.lo.shape[1]):
        col = Interval._raw(M.lo[:, k].copy(), M.hi[:, k].copy())
        acc = acc + col * v[k]
    return acc


def krawczyk(system, p: Param, xt: np.ndarray, r: float):
    """Krawczyk image of ``X = xt + [-r, r]`` and the strict-inclusion verdict."""
    N = xt.shape[0]
    X = Interval(xt - r, xt + r)
    X = Interval._raw(np.nextafter(X.lo, -np.inf), np.nextafter(X.hi, np.inf))
    Fx, _ = system(p, _iv(xt))
    _, JX = system(p, X)
    Jmid = 0.5 * (JX.lo + JX.hi)
    try:
        Y = np.linalg.inv(Jmid)
    except np.linalg.LinAlgError:
        return X, None, False
    if not np.all(np.isfinite(Y)):
        return X, None, False
    I = _zeros((N, N))
    I.lo[np.diag_indices(N)] = 1.0
    I.hi[np.diag_indices(N)] = 1.0
    M = I - _matmat(Y, JX)
    K = _iv(xt) - _matvec(Y, Fx) + _imatvec(M, X - _iv(xt))
    ok = bool(np.all(K.lo > X.lo) and np.all(K.hi < X.hi))
    return X, K, ok


# -- certificates --------------------------------------------------------------------

@dataclass
class Certificate:
    """Existence and uniqueness of one period-``n`` point in ``box``.

    ``box`` is the unfolded box: ``n`` intervals for real points, or ``2n``
    (real parts then imaginary parts) for nonreal ones.  ``image`` is the
    Krawczyk image, strictly inside ``box``.
    """

    param: str
    n: int
    mode: str  # "real" or "nonreal"
    box: IntervalBox
    image: IntervalBox
    radius: float

    @property
    def point_box(self) -> IntervalBox:
        """Phase-space box of ``(x_0, y_0) = (x_0, x_{n-1})`` (ℝ² or ℂ² as ℝ⁴)."""
        n = self.n
        if self.mode == "real":
            idx = [0, n - 1]
        else:
            idx = [0, n, n - 1, 2 * n - 1]  # (Re x, Im x, Re y, Im y)
        return IntervalBox(self.box.lo[idx], self.box.hi[idx])

    def as_complex_box(self) -> IntervalBox:
        """``2n`` form of the box (real boxes get ``Im = [0, 0]``)."""
        if self.mode != "real":
            return self.box
        z = np.zeros(self.n)
        return IntervalBox(np.concatenate([self.box.lo, z]), np.concatenate([self.box.hi, z]))

    def conjugate(self) -> "Certificate":
        if self.mode == "real":
            return self
        n = self.n

        def flip(b: IntervalBox) -> IntervalBox:
            lo = np.concatenate([b.lo[:n], -b.hi[n:]])
            hi = np.concatenate([b.hi[:n], -b.lo[n:]])
            return IntervalBox(lo, hi)

        return Certificate(self.param, n, self.mode, flip(self.box), flip(self.image), self.radius)

    def is_nonreal(self) -> bool:
        n = self.n
        im_lo, im_hi = self.box.lo[n:], self.box.hi[n:]
        return bool(self.mode != "real" and np.any((im_lo > 0) | (im_hi < 0)))

    def to_dict(self) -> dict:
        return {"param": self.param, "n": self.n, "mode": self.mode, "radius": self.radius,
                "box": [[repr(float(l)), repr(float(h))] for l, h in zip(self.box.lo, self.box.hi)],
                "image": [[repr(float(l)), repr(float(h))] for l, h in zip(self.image.lo, self.image.hi)]}

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        def box(rows):
            return IntervalBox(np.array([float(r[0]) for r in rows]), np.array([float(r[1]) for r in rows]))
        return cls(d["param"], d["n"], d["mode"], box(d["box"]), box(d["image"]), d["radius"])


def certify(p: Param, seed, n: int | None = None, mode: str | None = None,
            inflations=_INFLATIONS) -> Certificate | None:
    """Krawczyk certificate around ``seed`` (an unfolded period vector) or ``None``.

    ``mode`` is ``"real"`` (``n`` unknowns) or ``"nonreal"`` (``2n``); by default
    it follows the seed.  The radius grows through ``inflations`` (relative to
    ``1 + |seed|``) until the strict inclusion holds.
    """
    seed = np.asarray(seed)
    n = seed.shape[0] if n is None else n
    if seed.shape[0] != n:
        raise ValueError("seed length must equal the period")
    if mode is None:
        mode = "real" if np.isrealobj(seed) or _is_real(seed, 0.0) else "nonreal"
    if mode == "real":
        if not p.is_real:
            raise ValueError("real certificates need a real parameter")
        xt, system = np.real(seed).astype(float), _sys_real
    elif mode == "nonreal":
        s = seed.astype(complex)
        xt, system = np.concatenate([s.real, s.imag]), _sys_complex
    else:
        raise ValueError(f"unknown certificate mode {mode!r}")
    scale = 1.0 + float(np.max(np.abs(xt)))
    for rel in inflations:
        r = rel * scale
        X, K, ok = krawczyk(system, p, xt, r)
        if ok:
            cert = Certificate(_param_text(p), n, mode, IntervalBox(X.lo, X.hi),
                               IntervalBox(K.lo, K.hi), r)
            if mode == "nonreal" and not cert.is_nonreal():
                return None
            return cert
    return None


def _param_text(p: Param) -> str:
    return str(p)


def _boxes_disjoint(certs: list) -> bool:
    if len(certs) < 2:
        return True
    lo = np.array([c.as_complex_box().lo for c in certs])
    hi = np.array([c.as_complex_box().hi for c in certs])
    for i in range(len(certs) - 1):
        meet = np.all((lo[i] <= hi[i + 1:]) & (lo[i + 1:] <= hi[i]), axis=1)
        if np.any(meet):
            return False
    return True


def orbit_closure_meets(p: Param, cert: Certificate) -> bool:
    """Sanity check: ``H^n`` of the point box meets the point box."""
    q = p if cert.mode == "real" else p.with_mode(COMPLEX)
    b = cert.point_box
    z = b
    for _ in range(cert.n):
        z = eval_fwd(q, z)
    return b.overlaps(z)


@dataclass
class CountReport:
    param: str
    n: int
    lower_real: int
    upper_real: int
    certificates: list = field(default_factory=list)
    seeds_found: int = 0

    @property
    def exact(self) -> bool:
        return self.lower_real == self.upper_real

    @property
    def value(self) -> int | None:
        return self.lower_real if self.exact else None

    def line(self) -> str:
        v = str(self.lower_real) if self.exact else f"[{self.lower_real}, {self.upper_real}]"
        return f"n={self.n}: {v}{'' if self.exact else ' (inexact)'}"


def count_real(p: Param, n: int) -> CountReport:
    """Bounds on ``|Fix(H^n) ∩ R^2|`` from certified real and nonreal points."""
    if not p.is_real:
        raise ValueError("counting real points needs a real point parameter")
    a, c = p.mid_point()
    xs = track_all(a, c, n)
    certs: list[Certificate] = []
    n_real = n_nonreal = 0
    for x in xs:
        if _is_real(x):
            cert = certify(p, _newton(x.real[None, :], a.real, c.real, 3)[0], n, "real")
            if cert is not None:
                certs.append(cert)
                n_real += 1
        elif x[np.argmax(np.abs(x.imag))].imag > 0:
            cert = certify(p.with_mode(COMPLEX), x, n, "nonreal")
            if cert is not None:
                certs.extend([cert, cert.conjugate()])
                n_nonreal += 2
    if not _boxes_disjoint(certs):
        raise AssertionError("certificate boxes overlap; refusing to count")
    rep = CountReport(_param_text(p), n, n_real, 2 ** n - n_nonreal, certs, len(xs))
    return rep


@dataclass
class PruningCheck:
    param: str
    forbidden: tuple
    rows: list  # (n, count report line, sft count, verdict)

    @property
    def passed(self) -> bool:
        return all(v == "pass" for *_, v in self.rows)

    @property
    def verdict(self) -> str:
        if self.passed:
            return "pass"
        return "fail" if any(v == "fail" for *_, v in self.rows) else "inconclusive"


def crosscheck_pruning(p: Param, sft: SFT, n_range) -> PruningCheck:
    """Compare certified real counts with the SFT's periodic-point counts."""
    rows = []
    for n in n_range:
        rep = count_real(p, n)
        want = count_fixed(sft, n)
        if not rep.exact:
            verdict = "inconclusive"
        else:
            verdict = "pass" if rep.lower_real == want else "fail"
        rows.append((n, rep.lower_real if rep.exact else (rep.lower_real, rep.upper_real), want, verdict))
    return PruningCheck(_param_text(p), sft.forbidden, rows)


def save_certificates(reports: list, path) -> None:
    doc = {"format": "horseshoe certificates v1",
           "method": "Krawczyk operator on the unfolded periodic system",
           "reports": [{"param": r.param, "n": r.n, "lower_real": r.lower_real,
                        "upper_real": r.upper_real,
                        "certificates": [c.to_dict() for c in r.certificates]} for r in reports]}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_certificates(path) -> list:
    doc = json.loads(Path(path).read_text())
    out = []
    for r in doc["reports"]:
        certs = [Certificate.from_dict(d) for d in r["certificates"]]
        out.append(CountReport(r["param"], r["n"], r["lower_real"], r["upper_real"], certs))
    return out
