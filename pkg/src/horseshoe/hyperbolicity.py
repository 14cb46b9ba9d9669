"""Quasi-hyperbolicity certificates for Hénon maps.

The tangent map ``TH(z, v) = (H(z), DH(z) v)`` is linear in the fiber, so a
nontrivial bounded tangent orbit over the chain recurrent set can be rescaled
until it touches the boundary of the unit fiber box ``[-1, 1]^k`` while staying
inside it.  The certificate therefore consists of

1. a cubical enclosure ``B`` of the chain recurrent set,
2. the transition graph of ``B x [-1, 1]^k`` under interval ``TH``, and
3. the check that no vertex of its combinatorial invariant set lies in the
   fiber boundary layer.

If the check passes, no bounded tangent orbit other than the zero section
exists over ``R(H)``, for every parameter in the box.

Tangent vertices are pairs ``(u, f)`` of a base cube and a fiber cell.  The
fiber image ``DH(u) f`` depends only on the base cube, so the tangent graph is
never stored: the invariant set is computed by pruning sweeps that rebuild
fiber images per base cube from the base graph.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
from numba import njit

from .cubical import (
    CubicalSet,
    Grid,
    RefinementExhausted,
    _index_range,
    build_graph,
    chain_recurrent_vertices,
    full_set,
    refine_loop,
)
from .henon import COMPLEX, REAL, HenonBoxMap, Param, _cmul, conj_param, trap_box
from .interval import Interval, imul, iscale, isub

__all__ = [
    "CERTIFIED",
    "UNKNOWN",
    "Budgets",
    "VerifyReport",
    "TangentResult",
    "enclose_chain_recurrent",
    "tangent_invariant",
    "verify_quasi_hyperbolic",
    "SweepResult",
    "sweep_params",
    "save_sweep",
    "load_sweep",
]

CERTIFIED = "Certified"
UNKNOWN = "Unknown"

_BASE_DEPTH0 = {REAL: 4, COMPLEX: 3}


@dataclass(frozen=True)
class Budgets:
    """Resource limits for one verification.

    ``max_work`` counts tangent-vertex visits (base degree plus rectangle
    corners, times fiber size) and makes outcomes reproducible; ``wall_time``
    is in seconds and may legitimately change outcomes between machines.
    """

    max_cubes: int = 2_000_000
    max_edges: int = 40_000_000
    max_work: float = 5e11
    wall_time: float | None = None
    max_base_rounds: int = 10
    fiber_depths: tuple = (2, 3, 4)
    max_tangent_vertices: int = 400_000_000

    @classmethod
    def zero(cls) -> "Budgets":
        return cls(max_cubes=0, max_edges=0, max_work=0, wall_time=0.0, max_base_rounds=0)

    @classmethod
    def for_mode(cls, mode: str, **kw) -> "Budgets":
        if mode == COMPLEX:
            kw.setdefault("fiber_depths", (2, 3))
            kw.setdefault("max_base_rounds", 8)
        return cls(**kw)


@dataclass
class VerifyReport:
    status: str
    mode: str
    param: str
    base_depth: tuple | None = None
    fiber_depth: int | None = None
    base_cubes: int = 0
    base_edges: int = 0
    tangent_vertices: int = 0
    boundary_alive: int | None = None
    sweeps: int = 0
    work: float = 0.0
    wall_time: float = 0.0
    reason: str = ""
    attempts: list = field(default_factory=list)
    budgets: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        d = asdict(self)
        d["base_depth"] = list(self.base_depth) if self.base_depth else None
        return d

    def summary(self) -> str:
        s = (f"{self.status}: {self.param} base depth {self.base_depth} "
             f"fiber depth {self.fiber_depth} cubes {self.base_cubes} "
             f"edges {self.base_edges} time {self.wall_time:.1f}s")
        return s + (f" ({self.reason})" if self.reason else "")


# -- compiled tangent pruning ----------------------------------------------------------

@njit(cache=True)
def _tangent_cell(blo, bhi, flo, fhi, prm, cplx, olo, ohi):
    if not cplx:
        tx = iscale(2.0, blo[0], bhi[0])
        p = imul(tx[0], tx[1], flo[0], fhi[0])
        q = imul(prm[0], prm[1], flo[1], fhi[1])
        r = isub(p[0], p[1], q[0], q[1])
        olo[0] = r[0]
        ohi[0] = r[1]
        olo[1] = flo[0]
        ohi[1] = fhi[0]
    else:
        txr = iscale(2.0, blo[0], bhi[0])
        txi = iscale(2.0, blo[1], bhi[1])
        p = _cmul(txr[0], txr[1], txi[0], txi[1], flo[0], fhi[0], flo[1], fhi[1])
        q = _cmul(prm[0], prm[1], prm[2], prm[3], flo[2], fhi[2], flo[3], fhi[3])
        re = isub(p[0], p[1], q[0], q[1])
        im = isub(p[2], p[3], q[2], q[3])
        olo[0] = re[0]
        ohi[0] = re[1]
        olo[1] = im[0]
        ohi[1] = im[1]
        olo[2] = flo[0]
        ohi[2] = fhi[0]
        olo[3] = flo[1]
        ohi[3] = fhi[1]


@njit(cache=True)
def _fiber_rects(blo, bhi, prm, cplx, m, fcoords, ra, rb, empty):
    """Index rectangles of ``DH(base) f`` for every fiber cell ``f``."""
    F, k = fcoords.shape
    w = 2.0 / m
    flo = np.empty(k)
    fhi = np.empty(k)
    olo = np.empty(k)
    ohi = np.empty(k)
    for f in range(F):
        for j in range(k):
            flo[j] = -1.0 + fcoords[f, j] * w
            fhi[j] = flo[j] + w
        _tangent_cell(blo, bhi, flo, fhi, prm, cplx, olo, ohi)
        e = False
        for j in range(k):
            if ohi[j] < -1.0 or olo[j] > 1.0:
                e = True
            a, b = _index_range(olo[j], ohi[j], -1.0, w, m)
            if a > b:
                e = True
            ra[f, j] = a
            rb[f, j] = b
        empty[f] = e


@njit(cache=True)
def _prefix_sums(tab, m, k, stride):
    # in-place inclusive prefix sums along every axis of a (m+1)^k table
    P = tab.shape[0]
    for j in range(k):
        s = stride[j]
        for i in range(P):
            if (i // s) % (m + 1) != 0:
                tab[i] += tab[i - s]


@njit(cache=True)
def _sweep(indptr, indices, blo, bhi, prm, cplx, m, fcoords, alive, boundary, has_pred):
    """One pruning sweep: drop tangent vertices lacking a successor or a predecessor.

    Returns ``(changed, work, boundary_alive)``.
    """
    N, F = alive.shape
    k = fcoords.shape[1]
    P = (m + 1) ** k
    stride = np.empty(k, dtype=np.int64)
    for j in range(k):
        stride[j] = (m + 1) ** (k - 1 - j)
    tab = np.zeros(P, dtype=np.int32)
    acc = np.zeros(F, dtype=np.uint8)
    ra = np.empty((F, k), dtype=np.int64)
    rb = np.empty((F, k), dtype=np.int64)
    empty = np.empty(F, dtype=np.bool_)
    ncorner = 1 << k
    work = 0.0
    changed = False
    # successor test: an alive (v, g) with u -> v and g in rect(u, f)
    for u in range(N):
        any_alive = False
        for f in range(F):
            if alive[u, f]:
                any_alive = True
                break
        if not any_alive:
            continue
        acc[:] = 0
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            for f in range(F):
                acc[f] |= alive[v, f]
        tab[:] = 0
        for f in range(F):
            if acc[f]:
                i = 0
                for j in range(k):
                    i += (fcoords[f, j] + 1) * stride[j]
                tab[i] = 1
        _prefix_sums(tab, m, k, stride)
        _fiber_rects(blo[u], bhi[u], prm, cplx, m, fcoords, ra, rb, empty)
        for f in range(F):
            if not alive[u, f]:
                continue
            tot = 0
            if not empty[f]:
                for cnr in range(ncorner):
                    i = 0
                    sgn = 1
                    for j in range(k):
                        if (cnr >> j) & 1:
                            i += ra[f, j] * stride[j]
                            sgn = -sgn
                        else:
                            i += (rb[f, j] + 1) * stride[j]
                    tot += sgn * tab[i]
            if tot <= 0:
                alive[u, f] = 0
                changed = True
        work += (indptr[u + 1] - indptr[u] + ncorner) * F
    # predecessor test: union of alive rectangles of u, pushed to every successor
    has_pred[:, :] = 0
    for u in range(N):
        tab[:] = 0
        cnt = 0
        _fiber_rects(blo[u], bhi[u], prm, cplx, m, fcoords, ra, rb, empty)
        for f in range(F):
            if not alive[u, f] or empty[f]:
                continue
            cnt += 1
            for cnr in range(ncorner):
                i = 0
                sgn = 1
                for j in range(k):
                    if (cnr >> j) & 1:
                        i += (rb[f, j] + 1) * stride[j]
                        sgn = -sgn
                    else:
                        i += ra[f, j] * stride[j]
                tab[i] += sgn
        if cnt == 0:
            continue
        _prefix_sums(tab, m, k, stride)
        for f in range(F):
            i = 0
            for j in range(k):
                i += fcoords[f, j] * stride[j]
            acc[f] = 1 if tab[i] > 0 else 0
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            for f in range(F):
                has_pred[v, f] |= acc[f]
        work += (indptr[u + 1] - indptr[u] + ncorner) * F
    nb = 0
    for u in range(N):
        for f in range(F):
            if alive[u, f] and not has_pred[u, f]:
                alive[u, f] = 0
                changed = True
            if alive[u, f] and boundary[f]:
                nb += 1
    return changed, work, nb


def fiber_cells(k: int, depth: int) -> np.ndarray:
    """Lattice coordinates of the fiber cells of ``[-1, 1]^k`` at ``depth``, row-major."""
    m = 1 << depth
    grids = np.meshgrid(*[np.arange(m)] * k, indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, k).astype(np.int64)


def zero_layer(fcoords: np.ndarray, depth: int) -> np.ndarray:
    """Fiber cells touching the zero vector."""
    m = 1 << depth
    return np.all((fcoords == m // 2 - 1) | (fcoords == m // 2), axis=1)


def boundary_layer(fcoords: np.ndarray, depth: int) -> np.ndarray:
    """Fiber cells touching the boundary of ``[-1, 1]^k``."""
    m = 1 << depth
    return np.any((fcoords == 0) | (fcoords == m - 1), axis=1)


@dataclass
class TangentResult:
    """Outcome of the tangent isolation test on one base set."""

    isolated: bool
    stop: str  # "fixpoint", "boundary-empty", "work", "deadline"
    alive: np.ndarray  # (base cubes, fiber cells) uint8 survivors
    boundary_alive: int
    collar_alive: int
    sweeps: int
    work: float
    edges: int


def tangent_invariant(p: Param, base: CubicalSet, fiber_depth: int, *,
                      collar: CubicalSet | None = None, max_work: float = math.inf,
                      deadline: float | None = None, stop_early: bool = True,
                      graph=None) -> TangentResult:
    """Prune ``base x [-1, 1]^k`` to its combinatorial invariant set under ``TH``.

    ``collar``, if given, is a subset of ``base`` whose surviving vertices also
    count as failures.  With ``stop_early`` the sweeps end as soon as the
    fiber boundary layer is empty, since later sweeps only remove vertices.
    """
    if fiber_depth < 2:
        # at depth 1 every cell touches both the zero vector and the boundary
        raise ValueError("fiber depth must be at least 2 so the zero and boundary layers are disjoint")
    k = base.grid.dim
    g = build_graph(base, HenonBoxMap(p)) if graph is None else graph
    fcoords = fiber_cells(k, fiber_depth)
    bd = boundary_layer(fcoords, fiber_depth)
    m = 1 << fiber_depth
    blo, bhi = base.boxes()
    alive = np.ones((len(base), fcoords.shape[0]), dtype=np.uint8)
    has_pred = np.empty_like(alive)
    cmask = np.zeros(len(base), dtype=bool) if collar is None else collar.contains(base.keys)
    prm = p.kernel_array()
    cplx = p.mode == COMPLEX
    sweeps, work, stop = 0, 0.0, "fixpoint"
    nb = int(alive[:, bd].sum())
    while True:
        changed, w, nb = _sweep(g.indptr, g.indices, blo, bhi, prm, cplx, m, fcoords,
                                alive, bd, has_pred)
        sweeps += 1
        work += w
        ncol = int(alive[cmask].sum()) if collar is not None else 0
        if stop_early and nb == 0 and ncol == 0:
            stop = "boundary-empty"
            break
        if not changed:
            break
        if work > max_work:
            stop = "work"
            break
        if deadline is not None and time.monotonic() > deadline:
            stop = "deadline"
            break
    ncol = int(alive[cmask].sum()) if collar is not None else 0
    isolated = nb == 0 and ncol == 0 and stop in ("fixpoint", "boundary-empty")
    return TangentResult(isolated, stop, alive, nb, ncol, sweeps, work, g.n_edges)


# -- enclosures and the verification driver ----------------------------------------------

def enclose_chain_recurrent(p: Param, mode: str | None = None, rounds: int = 6, *,
                            depth0: int | None = None, max_cubes: int | None = None,
                            history: list | None = None) -> CubicalSet:
    """Outer enclosure of the chain recurrent set for every parameter in ``p``.

    Starts from the full grid on the trapping box at ``depth0`` and alternates
    subdivision with chain-recurrent pruning ``rounds`` times.
    """
    if mode is not None:
        p = p.with_mode(mode)
    d0 = _BASE_DEPTH0[p.mode] if depth0 is None else depth0
    S = full_set(Grid.around(trap_box(p), d0))
    return refine_loop(S, HenonBoxMap(p), rounds, prune="chain_recurrent", max_cubes=max_cubes,
                       history=history)


def _budget_dict(b: Budgets) -> dict:
    d = asdict(b)
    d["fiber_depths"] = list(b.fiber_depths)
    return d


def verify_quasi_hyperbolic(p: Param, mode: str | None = None, budgets: Budgets | None = None,
                            *, collar: bool = False, base_depth0: int | None = None,
                            min_base_rounds: int = 0) -> VerifyReport:
    """Try to certify uniform hyperbolicity on the chain recurrent set for all of ``p``.

    The schedule refines the base enclosure one round at a time and, at each
    base resolution, tries the fiber depths in ``budgets.fiber_depths``.
    ``collar=True`` adds a one-cube collar around the base enclosure and also
    demands that no surviving tangent vertex lies over it.
    """
    if mode is not None:
        p = p.with_mode(mode)
    budgets = budgets or Budgets.for_mode(p.mode)
    t0 = time.monotonic()
    deadline = None if budgets.wall_time is None else t0 + budgets.wall_time
    rep = VerifyReport(UNKNOWN, p.mode, str(p), budgets=_budget_dict(budgets))

    def done(reason: str) -> VerifyReport:
        rep.reason = reason
        rep.wall_time = time.monotonic() - t0
        return rep

    if budgets.max_cubes <= 0 or budgets.max_edges <= 0 or budgets.max_work <= 0 \
            or (budgets.wall_time is not None and budgets.wall_time <= 0):
        return done("budget: zero budget")
    d0 = _BASE_DEPTH0[p.mode] if base_depth0 is None else base_depth0
    f = HenonBoxMap(p)
    S = full_set(Grid.around(trap_box(p), d0))
    try:
        S = chain_recurrent_vertices(build_graph(S, f))
    except ArithmeticError as exc:
        return done(f"arithmetic: {exc}")
    rounds = 0
    while True:
        if not S:
            # empty chain recurrent set: vacuously hyperbolic
            rep.status = CERTIFIED
            rep.base_depth = S.grid.depth
            return done("empty chain recurrent set")
        if rounds >= min_base_rounds:
            base, col = S, None
            if collar:
                base = S.dilate(1)
                col = base - S
            try:
                g = build_graph(base, f, budgets.max_edges + 1)
            except RefinementExhausted:
                return done(f"budget: base edges > {budgets.max_edges}")
            rep.base_depth, rep.base_cubes, rep.base_edges = base.grid.depth, len(base), g.n_edges
            if g.n_edges > budgets.max_edges:
                return done(f"budget: {g.n_edges} base edges > {budgets.max_edges}")
            for fd in budgets.fiber_depths:
                F = 1 << (fd * base.grid.dim)
                if len(base) * F > budgets.max_tangent_vertices:
                    rep.attempts.append({"base_depth": list(base.grid.depth), "fiber_depth": fd,
                                         "skipped": "tangent vertex budget"})
                    break
                left = budgets.max_work - rep.work
                res = tangent_invariant(p, base, fd, collar=col, max_work=left, deadline=deadline,
                                        graph=g)
                rep.work += res.work
                rep.sweeps += res.sweeps
                rep.attempts.append({"base_depth": list(base.grid.depth), "fiber_depth": fd,
                                     "base_cubes": len(base), "boundary_alive": res.boundary_alive,
                                     "collar_alive": res.collar_alive, "stop": res.stop,
                                     "sweeps": res.sweeps})
                rep.fiber_depth = fd
                rep.tangent_vertices = len(base) * F
                rep.boundary_alive = res.boundary_alive
                if res.isolated:
                    rep.status = CERTIFIED
                    return done("")
                if res.stop == "work":
                    return done("budget: work units exhausted")
                if res.stop == "deadline":
                    return done("budget: wall time exhausted")
        if rounds >= budgets.max_base_rounds:
            return done(f"isolation failed up to {rounds} base rounds "
                        f"(boundary survivors {rep.boundary_alive})")
        if len(S) * 2 ** S.grid.dim > budgets.max_cubes:
            return done(f"budget: next base round needs {len(S) * 2 ** S.grid.dim} cubes")
        if deadline is not None and time.monotonic() > deadline:
            return done("budget: wall time exhausted")
        try:
            S = refine_loop(S, f, 1, prune="chain_recurrent", prune_first=False)
        except RefinementExhausted as exc:
            return done(f"refinement exhausted: {exc}")
        rounds += 1


# -- parameter sweeps -------------------------------------------------------------------

_PARAM_AXES = ("a_re", "a_im", "c_re", "c_im")


def _split(p: Param) -> tuple[Param, Param]:
    """Bisect the widest parameter axis; the halves cover ``p`` exactly."""
    widths = [float(getattr(p, ax).hi - getattr(p, ax).lo) for ax in _PARAM_AXES]
    ax = _PARAM_AXES[int(np.argmax(widths))]
    iv = getattr(p, ax)
    mid = 0.5 * iv.lo + 0.5 * iv.hi
    if not (iv.lo < mid < iv.hi):
        raise ValueError(f"cannot bisect {ax} further")
    return (replace(p, **{ax: Interval(iv.lo, mid)}), replace(p, **{ax: Interval(mid, iv.hi)}))


def _is_mirror(p: Param, q: Param) -> bool:
    return (p.a_re == q.a_re and p.c_re == q.c_re and p.a_im == -q.a_im and p.c_im == -q.c_im)


def _halve_by_symmetry(region: list) -> tuple[list, list]:
    """Boxes to compute plus ``(mirror_box, source_box)`` pairs resolved by conjugation.

    Only applies when the region is closed under conjugation.  Boxes straddling
    ``Im c = 0`` (with real ``a``) symmetrically are split at ``Im c = 0``.
    """
    boxes = []
    for p in region:
        sym = (p.a_im.lo == p.a_im.hi == 0.0 and p.c_im.lo == -p.c_im.hi and p.c_im.hi > 0)
        if sym:
            boxes.append(replace(p, c_im=Interval(0.0, p.c_im.hi)))
            boxes.append(replace(p, c_im=Interval(p.c_im.lo, 0.0)))
        else:
            boxes.append(p)
    work, mirrored = [], []
    remaining = list(boxes)
    while remaining:
        p = remaining.pop(0)
        twin = next((q for q in remaining if _is_mirror(p, q)), None)
        if twin is None and _is_mirror(p, p):
            work.append(p)
            continue
        if twin is None:
            return list(region), []
        remaining.remove(twin)
        upper, lower = (p, twin) if p.c_im.hi >= twin.c_im.hi else (twin, p)
        work.append(upper)
        mirrored.append((lower, upper))
    return work, mirrored


@dataclass
class SweepResult:
    certified: list = field(default_factory=list)  # Param boxes
    unknown: list = field(default_factory=list)
    reports: list = field(default_factory=list)  # (Param, VerifyReport or None)
    symmetric: bool = False

    def __bool__(self):
        return bool(self.certified or self.unknown)


def _verify_task(args):
    p, mode, budgets = args
    return verify_quasi_hyperbolic(p, mode, budgets)


def sweep_params(region, mode: str = REAL, max_param_depth: int = 4,
                 budgets: Budgets | None = None, *, symmetry: bool = True,
                 workers: int = 1) -> SweepResult:
    """Certify a list of parameter boxes, bisecting failures up to ``max_param_depth``.

    When the region is closed under complex conjugation only its ``Im c >= 0``
    half is computed; mirror boxes inherit the outcome because ``H_{a,c}`` and
    ``H_{conj a, conj c}`` are conjugate.
    """
    region = [p.with_mode(mode) for p in region]
    budgets = budgets or Budgets.for_mode(mode)
    out = SweepResult()
    work, mirrored = (_halve_by_symmetry(region) if symmetry and mode == COMPLEX
                      else (region, []))
    out.symmetric = bool(mirrored)
    frontier = [(p, 0) for p in work]
    results = {}
    while frontier:
        args = [(p, mode, budgets) for p, _ in frontier]
        if workers > 1 and len(args) > 1:
            with ProcessPoolExecutor(workers) as ex:
                reps = list(ex.map(_verify_task, args))
        else:
            reps = [_verify_task(a) for a in args]
        nxt = []
        for (p, depth), rep in zip(frontier, reps):
            out.reports.append((p, rep))
            if rep.certified:
                results[p] = True
                out.certified.append(p)
            elif depth < max_param_depth:
                try:
                    nxt.extend((q, depth + 1) for q in _split(p))
                except ValueError:
                    out.unknown.append(p)
            else:
                out.unknown.append(p)
        frontier = nxt
    # mirror boxes: conjugate every certified/unknown sub-box of the source
    for lower, upper in mirrored:
        for src, dst in ((out.certified, out.certified), (out.unknown, out.unknown)):
            for q in list(src):
                if _inside(q, upper) and q.c_im.lo >= 0.0:
                    dst.append(conj_param(q))
    return out


def _inside(q: Param, p: Param) -> bool:
    return all(getattr(p, ax).lo <= getattr(q, ax).lo and getattr(q, ax).hi <= getattr(p, ax).hi
               for ax in _PARAM_AXES)


def _param_to_json(p: Param) -> dict:
    d = {ax: [repr(float(getattr(p, ax).lo)), repr(float(getattr(p, ax).hi))] for ax in _PARAM_AXES}
    d["mode"] = p.mode
    return d


def _param_from_json(d: dict) -> Param:
    ivs = {ax: Interval(float(d[ax][0]), float(d[ax][1])) for ax in _PARAM_AXES}
    return Param(mode=d["mode"], **ivs)


def save_sweep(res: SweepResult, path) -> None:
    """Write a JSON report: every box with its status, depths and counts."""
    rep_of = {}
    for p, rep in res.reports:
        rep_of[_key(p)] = rep
    entries = []
    for status, boxes in ((CERTIFIED, res.certified), (UNKNOWN, res.unknown)):
        for p in boxes:
            rep = rep_of.get(_key(p))
            e = {"box": _param_to_json(p), "status": status,
                 "source": "computed" if rep is not None else "conjugate mirror"}
            if rep is not None:
                e.update(base_depth=list(rep.base_depth) if rep.base_depth else None,
                         fiber_depth=rep.fiber_depth, base_cubes=rep.base_cubes,
                         base_edges=rep.base_edges, wall_time=round(rep.wall_time, 3),
                         reason=rep.reason)
            entries.append(e)
    doc = {"format": "horseshoe sweep v1", "symmetry_halving": res.symmetric, "boxes": entries}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_sweep(path) -> SweepResult:
    doc = json.loads(Path(path).read_text())
    out = SweepResult(symmetric=doc.get("symmetry_halving", False))
    for e in doc["boxes"]:
        p = _param_from_json(e["box"])
        (out.certified if e["status"] == CERTIFIED else out.unknown).append(p)
    return out


def _key(p: Param):
    return tuple((float(getattr(p, ax).lo), float(getattr(p, ax).hi)) for ax in _PARAM_AXES) + (p.mode,)
