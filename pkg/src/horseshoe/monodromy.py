"""Monodromy of the horseshoe coding along loops of parameters.

At a basepoint in the Devaney-Nitecki region the invariant set splits by the
sign of ``Re y`` into two pieces, which defines the coding ``h_0``.  Following
a loop, the two pieces are continued through cubical enclosures of ``K`` over
short parameter segments; when the loop closes, the continued pieces may differ
from the original ones on a few blocks.  The itineraries of those blocks name
the words that the monodromy automorphism swaps.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cubical import (
    CubicalSet,
    Grid,
    RefinementExhausted,
    _adjacent_pairs,
    build_graph,
    full_set,
    load_cubes,
    refine_loop,
    save_cubes,
    subdivide,
)
from .henon import COMPLEX, HenonBoxMap, Param, Tri, in_DN, radius_R
from .interval import from_fraction
from .shift import FLIP, Automorphism, BlockSwap, InvalidAutomorphism

__all__ = [
    "ParamPath",
    "ParamLoop",
    "LoopError",
    "RefineNeeded",
    "AmbiguousItinerary",
    "PartitionTrack",
    "SwapResult",
    "enclose_K_over",
    "loop_grid",
    "initial_partition",
    "continue_partition",
    "identify_swapped_blocks",
    "coding_change",
    "monodromy_of",
    "gamma_empty",
    "compute_monodromy",
    "save_track",
]

RE_Y = 2  # axis of Re y in (Re x, Im x, Re y, Im y)


class LoopError(ValueError):
    pass


class RefineNeeded(RuntimeError):
    """The two continued pieces touch; ``slice_index`` is where they first meet."""

    def __init__(self, slice_index: int, message: str = ""):
        super().__init__(message or f"pieces merge at slice {slice_index}")
        self.slice_index = slice_index


class AmbiguousItinerary(RuntimeError):
    pass


# -- loops ----------------------------------------------------------------------------

def _frac(text) -> Fraction:
    return Fraction(str(text).strip())


def _cfrac(re, im=0) -> tuple[Fraction, Fraction]:
    return _frac(re), _frac(im)


@dataclass(frozen=True)
class ParamPath:
    """Piecewise linear path ``t -> (a(t), c(t))`` with exact rational vertices.

    Each vertex is ``(a_re, a_im, c_re, c_im)`` as Fractions; ``times`` are the
    time marks, from 0 to 1.  ``reference`` optionally names a path file (relative
    to this one) leading from the standard basepoint ``(1, -10)`` to our basepoint.
    ``coarsen`` holds one integer per segment: slices lying only on segments with
    ``coarsen = k`` are enclosed ``k`` grid levels below the requested depth.
    """

    vertices: tuple
    times: tuple
    symmetric: bool = False
    name: str = ""
    reference: str = ""
    coarsen: tuple = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.times) or len(self.vertices) < 2:
            raise LoopError("need at least two vertices with one time mark each")
        if self.times[0] != 0 or self.times[-1] != 1:
            raise LoopError("time marks must start at 0 and end at 1")
        if any(t1 <= t0 for t0, t1 in zip(self.times, self.times[1:])):
            raise LoopError("time marks must increase strictly")
        if not self.coarsen:
            object.__setattr__(self, "coarsen", (0,) * (len(self.times) - 1))
        object.__setattr__(self, "coarsen", tuple(int(k) for k in self.coarsen))
        if len(self.coarsen) != len(self.times) - 1 or min(self.coarsen) < 0:
            raise LoopError("need one nonnegative coarsening level per segment")
        if self.symmetric:
            self._check_symmetry()

    @classmethod
    def from_points(cls, points, times=None, symmetric=False, name="", reference="", coarsen=()):
        """``points`` as ``(a, c)`` with entries numbers, strings or ``(re, im)`` pairs."""
        verts = []
        for a, c in points:
            ar, ai = _cfrac(*a) if isinstance(a, (tuple, list)) else _cfrac(a)
            cr, ci = _cfrac(*c) if isinstance(c, (tuple, list)) else _cfrac(c)
            verts.append((ar, ai, cr, ci))
        if times is None:
            # arc-length parametrization in the (a, c) coordinates, rounded to rationals
            lens = [0.0]
            for v, w in zip(verts, verts[1:]):
                lens.append(lens[-1] + math.dist([float(x) for x in v], [float(x) for x in w]))
            times = [Fraction(s / lens[-1]).limit_denominator(1 << 20) for s in lens]
            times[0], times[-1] = Fraction(0), Fraction(1)
        else:
            times = [_frac(t) for t in times]
        return cls(tuple(verts), tuple(times), symmetric, name, reference, tuple(coarsen))

    def _check_symmetry(self):
        if Fraction(1, 2) not in self.times:
            raise LoopError("symmetric loops need a vertex at t = 1/2")
        for t, v in zip(self.times, self.vertices):
            w = self.at(1 - t)
            if w != (v[0], -v[1], v[2], -v[3]):
                raise LoopError(f"vertex at t={t} is not mirrored at t={1 - t}")
        if self.coarsen != self.coarsen[::-1]:
            raise LoopError("coarsening levels are not mirrored")

    @property
    def basepoint(self) -> tuple:
        return self.vertices[0]

    @property
    def endpoint(self) -> tuple:
        return self.vertices[-1]

    def at(self, t) -> tuple:
        """Exact point ``gamma(t)`` for rational ``t``."""
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("t outside [0, 1]")
        for k in range(len(self.times) - 1):
            t0, t1 = self.times[k], self.times[k + 1]
            if t0 <= t <= t1:
                s = (t - t0) / (t1 - t0)
                v, w = self.vertices[k], self.vertices[k + 1]
                return tuple(x + s * (y - x) for x, y in zip(v, w))
        raise AssertionError("unreachable")

    def hull(self, t0, t1) -> Param:
        """Interval hull of ``gamma([t0, t1])`` as a complex-mode parameter box."""
        t0, t1 = Fraction(t0), Fraction(t1)
        pts = [self.at(t0), self.at(t1)] + [v for t, v in zip(self.times, self.vertices) if t0 < t < t1]
        ivs = [from_fraction(min(p[j] for p in pts), max(p[j] for p in pts)) for j in range(4)]
        return Param(ivs[0], ivs[1], ivs[2], ivs[3], COMPLEX)

    def slice_depths(self, n_steps: int, depth: int) -> list[int]:
        """Grid depth of each of ``n_steps`` equal time slices."""
        out = []
        for k in range(n_steps):
            t0, t1 = Fraction(k, n_steps), Fraction(k + 1, n_steps)
            # finest level among the segments this slice overlaps
            lev = min(c for c, s0, s1 in zip(self.coarsen, self.times, self.times[1:])
                      if s0 < t1 and s1 > t0)
            out.append(max(depth - lev, 1))
        return out

    def point_param(self, t=0) -> Param:
        v = self.at(t)
        ivs = [from_fraction(x) for x in v]
        return Param(ivs[0], ivs[1], ivs[2], ivs[3], COMPLEX)

    def basepoint_param_real(self) -> Param:
        ar, ai, cr, ci = self.basepoint
        if ai != 0 or ci != 0:
            raise LoopError("basepoint is not real")
        return Param.make(from_fraction(ar), from_fraction(cr))

    # -- file format ------------------------------------------------------------------
    def dumps(self) -> str:
        lines = ["# horseshoe loop v1"]
        if self.name:
            lines.append(f"name {self.name}")
        lines.append(f"symmetric {'true' if self.symmetric else 'false'}")
        lines.append("basepoint 0")
        if self.reference:
            lines.append(f"reference {self.reference}")
        coarse = any(self.coarsen)
        lines.append("# t a_re a_im c_re c_im" + (" coarsen" if coarse else ""))
        for k, (t, v) in enumerate(zip(self.times, self.vertices)):
            cols = [_fmt_frac(t)] + [_fmt_frac(x) for x in v]
            if coarse and k < len(self.coarsen):
                cols.append(str(self.coarsen[k]))
            lines.append(" ".join(cols))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str):
        lines = [ln.strip() for ln in text.splitlines()]
        if not lines or lines[0] != "# horseshoe loop v1":
            raise LoopError("not a loop file")
        sym, name, ref, times, verts, coarsen = False, "", "", [], [], []
        for ln in lines[1:]:
            if not ln or ln.startswith("#"):
                continue
            key, _, rest = ln.partition(" ")
            if key == "symmetric":
                sym = rest.strip().lower() == "true"
            elif key == "name":
                name = rest.strip()
            elif key == "reference":
                ref = rest.strip()
            elif key == "basepoint":
                if rest.strip() != "0":
                    raise LoopError("the basepoint must be the first vertex")
            else:
                parts = ln.split()
                if len(parts) not in (5, 6):
                    raise LoopError(f"bad vertex line: {ln!r}")
                times.append(_frac(parts[0]))
                verts.append(tuple(_frac(x) for x in parts[1:5]))
                coarsen.append(int(parts[5]) if len(parts) == 6 else 0)
        # the last column describes the segment leaving a vertex; the final one has none
        return cls(tuple(verts), tuple(times), sym, name, ref, tuple(coarsen[:-1]))

    @classmethod
    def load(cls, path):
        return cls.loads(Path(path).read_text())

    def reference_path(self, directory) -> "ParamPath | None":
        """The path named by ``reference``, resolved against ``directory``."""
        if not self.reference:
            return None
        return ParamPath.load(Path(directory) / self.reference)


@dataclass(frozen=True)
class ParamLoop(ParamPath):
    """A closed :class:`ParamPath`: first vertex equals last vertex."""

    def __post_init__(self):
        super().__post_init__()
        if self.vertices[0] != self.vertices[-1]:
            raise LoopError("loop is not closed: first vertex differs from last")

    @classmethod
    def constant(cls, a, c) -> "ParamLoop":
        return cls.from_points([(a, c)] * 3, [0, "1/2", 1], symmetric=True, name="constant")


def _fmt_frac(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    # exact decimal when the denominator is 2^i 5^j, else a ratio
    d = x.denominator
    k = 0
    while d % 2 == 0:
        d //= 2
        k += 1
    j = 0
    while d % 5 == 0:
        d //= 5
        j += 1
    if d == 1:
        digits = max(k, j)
        scaled = x * 10 ** digits
        s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        return ("-" if x < 0 else "") + s[:-digits] + "." + s[-digits:]
    return f"{x.numerator}/{x.denominator}"


# -- enclosures ------------------------------------------------------------------------

def loop_grid(loop: ParamPath, depth: int) -> Grid:
    """Common grid for all slices: ``[-L, L]^4`` with ``L`` a power of two above ``R``."""
    # R grows with |a| and |c|, which are convex along each segment: vertices suffice
    r = max(float(radius_R(loop.point_param(t)).hi) for t in loop.times)
    L = 2.0 ** math.ceil(math.log2(r * (1 + 1e-9)))
    return Grid([-L] * 4, [L] * 4, depth)


def enclose_K_over(p: Param, grid: Grid, *, depth0: int = 3, max_cubes: int | None = None,
                   max_edges: int | None = 30_000_000, start: CubicalSet | None = None) -> CubicalSet:
    """Outer enclosure of ``K`` for every parameter of the box ``p`` on ``grid``.

    Refines from the full grid at ``depth0`` (or from ``start``, which must
    already contain ``K`` for all of ``p``) with invariant-set pruning.
    """
    p = p.with_mode(COMPLEX)
    r = float(radius_R(p).hi)
    if np.any(grid.lo > -r) or np.any(grid.hi < r):
        raise ValueError("grid domain does not contain the trapping box")
    S = start if start is not None else full_set(grid.with_depth(depth0))
    target = grid.depth[0]
    rounds = target - S.grid.depth[0]
    if rounds < 0:
        raise ValueError("start set is finer than the target grid")
    return refine_loop(S, HenonBoxMap(p), rounds, prune="inv", max_cubes=max_cubes,
                       max_edges=max_edges)


def initial_partition(N0: CubicalSet) -> np.ndarray:
    """Labels 0 / 1 for the components of ``N0`` on the ``Re y < 0`` / ``> 0`` side.

    Raises :class:`RefineNeeded` if some component meets both closed half spaces.
    """
    if N0.grid.dim != 4:
        raise ValueError("initial partition expects complex-mode (4-D) cubes")
    ncomp, comp = N0.components()
    lo, hi = N0.boxes()
    neg = np.zeros(ncomp, dtype=bool)
    pos = np.zeros(ncomp, dtype=bool)
    np.logical_or.at(neg, comp, lo[:, RE_Y] <= 0.0)
    np.logical_or.at(pos, comp, hi[:, RE_Y] >= 0.0)
    if np.any(neg & pos):
        raise RefineNeeded(0, "a component of the basepoint enclosure meets Re y = 0")
    return np.where(pos[comp], 1, 0).astype(np.int8)


# -- continuation ----------------------------------------------------------------------

@dataclass
class PartitionTrack:
    loop: ParamPath
    n_steps: int
    grid: Grid
    slices: list  # CubicalSet per time interval
    labels: list  # int8 arrays per slice: 0, 1, or -1 (no continuation of K)
    timings: list = field(default_factory=list)

    def piece(self, k: int, label: int) -> CubicalSet:
        return self.slices[k].subset(self.labels[k] == label)


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.bits = [0] * n

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[b] = a
            self.bits[a] |= self.bits[b]
        return a


def continue_partition(loop: ParamPath, n_steps: int, grid_depth: int, *,
                       max_cubes: int | None = 4_000_000, max_edges: int | None = 100_000_000,
                       depth0: int = 3, progress=None) -> PartitionTrack:
    """Continue the ``Re y`` partition of the basepoint along ``loop``.

    ``grid_depth`` is the finest depth; segments of ``loop`` with a coarsening
    level are enclosed on coarser grids.  Raises :class:`RefineNeeded` when the
    two continued pieces merge.
    """
    bp = loop.basepoint
    if bp[1] != 0 or bp[3] != 0 or in_DN(loop.basepoint_param_real()) is not Tri.YES:
        raise LoopError("loop basepoint must lie in the Devaney-Nitecki region")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    grid = loop_grid(loop, grid_depth)
    depths = loop.slice_depths(n_steps, grid_depth)
    slices, comps, ncomps, timings = [], [], [], []
    dsu_offsets = []
    total = 0
    for k in range(n_steps):
        t0 = time.monotonic()
        p = loop.hull(Fraction(k, n_steps), Fraction(k + 1, n_steps))
        try:
            S = enclose_K_over(p, grid.with_depth(depths[k]), depth0=min(depth0, depths[k]),
                               max_cubes=max_cubes, max_edges=max_edges)
        except RefinementExhausted as exc:
            # a segment hull this wide cannot be followed; shorter steps are needed
            raise RefineNeeded(k, f"slice {k}: {exc}") from exc
        nc, lab = S.components()
        slices.append(S)
        comps.append(lab)
        ncomps.append(nc)
        dsu_offsets.append(total)
        total += nc
        timings.append(time.monotonic() - t0)
        if progress is not None:
            progress(k, len(S), nc, timings[-1])
    dsu = _DSU(total)
    # roots: slice-0 components by side of Re y = 0
    lo, hi = slices[0].boxes()
    for i in range(len(slices[0])):
        node = dsu_offsets[0] + comps[0][i]
        if lo[i, RE_Y] <= 0.0:
            dsu.bits[node] |= 1
        if hi[i, RE_Y] >= 0.0:
            dsu.bits[node] |= 2
    for node in range(dsu_offsets[0], dsu_offsets[0] + ncomps[0]):
        if dsu.bits[node] == 3:
            raise RefineNeeded(0, "a slice-0 component meets Re y = 0")
    for k in range(1, n_steps):
        a, b = slices[k - 1], slices[k]
        if not a or not b:
            continue
        ca_, cb_ = comps[k - 1], comps[k]
        # compare on the finer of the two grids, where touching is exact
        if depths[k - 1] < depths[k]:
            a, ca_ = _lift(a, ca_, depths[k])
        elif depths[k] < depths[k - 1]:
            b, cb_ = _lift(b, cb_, depths[k - 1])
        src, dst = _adjacent_pairs(a, b)
        pairs = np.unique(np.stack([ca_[src], cb_[dst]], axis=1), axis=0)
        for ca, cb in pairs.tolist():
            r = dsu.union(dsu_offsets[k - 1] + ca, dsu_offsets[k] + cb)
            if dsu.bits[r] == 3:
                raise RefineNeeded(k)
    labels = []
    for k in range(n_steps):
        bits = np.array([dsu.bits[dsu.find(dsu_offsets[k] + c)] for c in range(ncomps[k])], dtype=np.int8)
        lab = np.full(ncomps[k], -1, dtype=np.int8)
        lab[bits == 1] = 0
        lab[bits == 2] = 1
        labels.append(lab[comps[k]] if ncomps[k] else np.empty(0, dtype=np.int8))
    return PartitionTrack(loop, n_steps, grid.with_depth(depths[0]), slices, labels, timings)


def _lift(S: CubicalSet, values: np.ndarray, depth: int):
    """Subdivide ``S`` down to ``depth``; children inherit their parent's value."""
    shift = depth - S.grid.depth[0]
    T = S
    for _ in range(shift):
        T = subdivide(T)
    parents = S.index_of(S.grid.keys_from_coords(T.coords() >> shift))
    return T, values[parents]


# -- swapped blocks ------------------------------------------------------------------

@dataclass
class SwapResult:
    pairs: list  # [(u, v)] dotted words; u has s_0 = 0, v has s_0 = 1
    changed_cubes: int = 0
    window: tuple = (0, 0)  # (head length - 1, tail length)

    def __str__(self):
        if not self.pairs:
            return "identity"
        return "; ".join(f"{u} <-> {v}" for u, v in self.pairs)

    def undotted(self) -> list:
        return [(u.replace(".", ""), v.replace(".", "")) for u, v in self.pairs]

    def recoded(self, coding: Automorphism) -> "SwapResult":
        """The same swaps written in the coding ``coding o h`` (identity or flip only)."""
        atoms = coding.atoms
        if any(a is not FLIP for a in atoms):
            raise InvalidAutomorphism("only the flip is supported as a change of coding")
        if len(atoms) % 2 == 0:
            return self
        table = str.maketrans("01", "10")
        pairs = [tuple(sorted((u.translate(table), v.translate(table)))) for u, v in self.pairs]
        return SwapResult(pairs, self.changed_cubes, self.window)


def _touch_labels(E: CubicalSet, N: CubicalSet, labels: np.ndarray) -> np.ndarray:
    """Bitmask per cube of ``E`` of the labels of touching ``N`` cubes (1: label 0, 2: label 1)."""
    out = np.zeros(len(E), dtype=np.int8)
    if not E or not N:
        return out
    owner = np.arange(len(E))
    dE, dN = E.grid.depth[0], N.grid.depth[0]
    if dN < dE:
        N, labels = _lift(N, labels, dE)
    elif dE < dN:
        E, owner = _lift(E, owner, dN)
    src, dst = _adjacent_pairs(E, N)
    src = owner[src]
    lab = labels[dst]
    ok = lab >= 0
    np.bitwise_or.at(out, src[ok], (1 << lab[ok]).astype(np.int8))
    return out


def _itineraries(g, init: np.ndarray, dmax: int):
    """Symbols ``s_i`` for ``-dmax <= i <= dmax`` per vertex (-1 where undetermined).

    ``s_i`` is determined when every cube reachable in exactly ``|i|`` steps
    (forward for ``i > 0``, backward for ``i < 0``) carries the same label.
    """
    n = g.n_vertices
    A = g.matrix().astype(bool).astype(np.int32).tocsr()
    sym = np.full((n, 2 * dmax + 1), -1, dtype=np.int8)
    sym[:, dmax] = init
    for M, sign in ((A, 1), (A.T.tocsr(), -1)):
        # has_l[v]: some path of the current length from v ends in a cube labeled l
        has0 = (init == 0).astype(np.int32)
        has1 = (init == 1).astype(np.int32)
        for i in range(1, dmax + 1):
            has0 = np.minimum(M @ has0, 1)
            has1 = np.minimum(M @ has1, 1)
            col = dmax + sign * i
            sym[(has0 > 0) & (has1 == 0), col] = 0
            sym[(has1 > 0) & (has0 == 0), col] = 1
    return sym


def _endpoint_labels(track: PartitionTrack, t) -> tuple[CubicalSet, np.ndarray, np.ndarray, np.ndarray]:
    """Enclosure ``E`` at ``gamma(t)`` with its ``Re y`` labels and the continued labels."""
    p = track.loop.point_param(t)
    E = enclose_K_over(p, track.grid)
    if not E:
        raise AmbiguousItinerary("empty enclosure at the endpoint")
    lo, hi = E.boxes()
    own = np.full(len(E), -1, dtype=np.int8)
    own[hi[:, RE_Y] < 0.0] = 0
    own[lo[:, RE_Y] > 0.0] = 1
    fin = _touch_labels(E, track.slices[-1], track.labels[-1])
    if np.any(fin == 3):
        raise AmbiguousItinerary("an endpoint cube touches both continued pieces")
    keep = fin > 0
    cont = np.where(fin == 2, 1, 0).astype(np.int8)
    return E, own, cont, keep


def coding_change(track: PartitionTrack) -> Automorphism:
    """Relabeling that turns the endpoint's own ``Re y`` coding into the continued one.

    ``track`` follows an open path between two points of the Devaney-Nitecki
    region.  Returns the identity or the flip; any other outcome raises.
    """
    end = track.loop.endpoint
    if end[1] != 0 or end[3] != 0:
        raise LoopError("path must end at a real parameter")
    E, own, cont, keep = _endpoint_labels(track, 1)
    if np.any(own[keep] < 0):
        raise AmbiguousItinerary("endpoint cubes meet Re y = 0; refine the grid")
    if not np.any(keep):
        raise AmbiguousItinerary("no endpoint cube touches the continued pieces")
    if np.all(cont[keep] == own[keep]):
        return Automorphism([])
    if np.all(cont[keep] != own[keep]):
        return Automorphism([FLIP])
    raise AmbiguousItinerary("continued coding is neither the Re y coding nor its flip")


def identify_swapped_blocks(track: PartitionTrack, d: int = 6,
                            coding: Automorphism | None = None) -> SwapResult:
    """Itineraries of the basepoint cubes whose label changed around the loop.

    ``coding`` is the relabeling from :func:`coding_change` for a path from the
    standard basepoint; words are reported in that coding when given.
    """
    p0 = track.loop.point_param(0)
    E, init, final, keep = _endpoint_labels(track, 0)
    if np.any(init < 0):
        raise AmbiguousItinerary("basepoint cubes meet Re y = 0; refine the grid")
    g = build_graph(E, HenonBoxMap(p0))
    sym = _itineraries(g, init, d)
    changed = keep & (final != init)
    if not np.any(changed):
        return SwapResult([], 0)
    unchanged = keep & ~changed
    best = None
    for total in range(0, 2 * d + 1):
        for left in range(0, min(total, d) + 1):
            right = total - left
            if right > d:
                continue
            cols = slice(d - left, d + right + 1)
            res = _window_words(sym[:, cols], init, changed, unchanged, left)
            if res is not None:
                best = (res, left, right)
                break
        if best is not None:
            break
    if best is None:
        raise AmbiguousItinerary("no window up to depth %d separates the changed cubes" % d)
    (u, v), left, right = best
    res = SwapResult([(u, v)], int(changed.sum()), (left, right))
    return res.recoded(coding) if coding is not None else res


def _window_words(win, init, changed, unchanged, left):
    ch0 = win[changed & (init == 0)]
    ch1 = win[changed & (init == 1)]
    if len(ch0) == 0 or len(ch1) == 0:
        return None
    if np.any(ch0 < 0) or np.any(ch1 < 0):
        return None
    if np.any(ch0 != ch0[0]) or np.any(ch1 != ch1[0]):
        return None
    u, v = ch0[0], ch1[0]
    diff = np.nonzero(u != v)[0]
    if diff.tolist() != [left]:
        return None
    # no unchanged cube may possibly carry u or v on this window
    rest = win[unchanged]
    for w in (u, v):
        maybe = np.all((rest == w) | (rest < 0), axis=1)
        if np.any(maybe):
            return None
    def fmt(w):
        s = "".join(map(str, w.tolist()))
        return s[:left + 1] + "." + s[left + 1:] if left + 1 < len(s) else s
    return fmt(u), fmt(v)


def monodromy_of(swaps: SwapResult) -> Automorphism:
    """Marker automorphism exchanging the swapped words (identity if none)."""
    atoms = []
    for u, v in swaps.pairs:
        try:
            atoms.append(BlockSwap.parse(u, v))
        except InvalidAutomorphism:
            raise
        except ValueError as exc:
            raise InvalidAutomorphism(str(exc)) from exc
    if len(atoms) > 1:
        for x in atoms:
            for y in atoms:
                if x is not y and (set(x.u) & set(y.u)) and not _compatible(x, y):
                    raise InvalidAutomorphism("overlapping incompatible swap words")
    return Automorphism(atoms)


def _compatible(x: BlockSwap, y: BlockSwap) -> bool:
    return x == y


def gamma_empty() -> Automorphism:
    """Monodromy of the loop around the HOV region: the symbol flip."""
    return Automorphism([FLIP])


# -- driver ---------------------------------------------------------------------------

def _escalate(run, n_steps, grid_depth, max_steps, max_depth, log, label):
    """Call ``run(n, depth)`` until it succeeds, doubling ``n`` first and then ``depth``."""
    attempts = []
    n, depth = n_steps, grid_depth
    while True:
        t0 = time.monotonic()
        try:
            out = run(n, depth)
            attempts.append({"path": label, "n_steps": n, "depth": depth, "outcome": str(out[-1]),
                             "seconds": round(time.monotonic() - t0, 1)})
            if log:
                log(attempts[-1])
            return out, attempts
        except (RefineNeeded, AmbiguousItinerary) as exc:
            attempts.append({"path": label, "n_steps": n, "depth": depth,
                             "outcome": f"refine: {exc}", "seconds": round(time.monotonic() - t0, 1)})
            if log:
                log(attempts[-1])
        if n < max_steps:
            n *= 2
        elif depth < max_depth:
            depth += 1
        else:
            raise RefinementExhausted(f"{label}: no success up to n_steps={n}, depth={depth}")


def compute_monodromy(loop: ParamLoop, n_steps: int = 32, grid_depth: int = 7, *,
                      max_steps: int = 256, max_depth: int = 8, itinerary_depth: int = 6,
                      reference: ParamPath | None = None, reference_steps: int = 128,
                      log=None):
    """Escalate ``(n_steps, grid_depth)`` until the continuation succeeds.

    The default schedule doubles ``n_steps`` first and deepens the grid once
    ``max_steps`` is reached.  With a ``reference`` path (from the standard
    basepoint to the loop's basepoint) the words are reported in the coding
    carried along that path; its schedule starts at ``reference_steps``.
    Returns ``(track, swaps, attempts)``.
    """
    coding, attempts = None, []
    if reference is not None:
        if reference.endpoint != loop.basepoint:
            raise LoopError("reference path does not end at the loop basepoint")

        def run_ref(n, depth):
            tr = continue_partition(reference, n, depth)
            return tr, coding_change(tr)

        (_, coding), attempts = _escalate(run_ref, reference_steps, grid_depth, max_steps, max_depth, log,
                                          reference.name or "reference")

    def run(n, depth):
        tr = continue_partition(loop, n, depth)
        return tr, identify_swapped_blocks(tr, itinerary_depth, coding)

    (track, swaps), more = _escalate(run, n_steps, grid_depth, max_steps, max_depth, log,
                                     loop.name or "loop")
    return track, swaps, attempts + more


def save_track(track: PartitionTrack, swaps: SwapResult | None, directory) -> Path:
    """Per-slice cube files, label files and an index ``track.json``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "loop.txt").write_text(track.loop.dumps())
    files = []
    for k, (S, lab) in enumerate(zip(track.slices, track.labels)):
        cf, lf = f"slice_{k:04d}.cubes", f"slice_{k:04d}.labels"
        save_cubes(S, d / cf)
        (d / lf).write_text("".join(f"{int(x)}\n" for x in lab))
        files.append({"slice": k, "cubes": cf, "labels": lf, "count": len(S)})
    index = {"format": "horseshoe track v1", "n_steps": track.n_steps,
             "depth": list(track.grid.depth), "loop": "loop.txt", "slices": files,
             "swaps": [list(p) for p in swaps.pairs] if swaps else None}
    (d / "track.json").write_text(json.dumps(index, indent=1) + "\n")
    return d / "track.json"


def load_track(directory) -> PartitionTrack:
    d = Path(directory)
    index = json.loads((d / "track.json").read_text())
    try:
        loop = ParamLoop.load(d / index["loop"])
    except LoopError:
        loop = ParamPath.load(d / index["loop"])
    slices, labels = [], []
    for e in index["slices"]:
        slices.append(load_cubes(d / e["cubes"]))
        txt = (d / e["labels"]).read_text().split()
        labels.append(np.array([int(x) for x in txt], dtype=np.int8))
    grid = slices[0].grid if slices else loop_grid(loop, index["depth"][0])
    return PartitionTrack(loop, index["n_steps"], grid, slices, labels)
