"""Cubical grids, cube sets and rigorous transition graphs.

A :class:`Grid` splits a dyadic domain box into ``2**depth[k]`` cubes along
axis ``k``.  Domain bounds are restricted to short dyadic numbers so that every
cube corner is an exact double: ``cube_boxes`` returns the ideal closed cubes.

Transition graphs are outer approximations.  There is an edge ``u -> v``
whenever the interval image of cube ``u`` meets the closed cube ``v``; extra
edges are possible, missing ones are not.  Everything downstream (invariant
sets, chain recurrence, isolation tests) inherits rigor from that property.
"""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .interval import IntervalBox

__all__ = [
    "RefinementExhausted",
    "Grid",
    "CubicalSet",
    "TransitionGraph",
    "cover",
    "full_set",
    "build_graph",
    "scc",
    "inv_vertices",
    "chain_recurrent_vertices",
    "subdivide",
    "refine_loop",
    "save_cubes",
    "load_cubes",
]

MAX_KEY_BITS = 62
_DOMAIN_BITS = 16  # domain bounds must be multiples of 2**-16


class RefinementExhausted(RuntimeError):
    """A depth limit or cube budget was hit before the computation finished."""


def _round_dyadic(v: float, up: bool) -> float:
    q = 2.0 ** -6
    return (math.ceil(v / q) if up else math.floor(v / q)) * q


class Grid:
    """Uniform dyadic grid on a domain box."""

    __slots__ = ("lo", "hi", "depth", "width", "shifts")

    def __init__(self, lo, hi, depth):
        lo = np.array(lo, dtype=float, ndmin=1)
        hi = np.array(hi, dtype=float, ndmin=1)
        depth = tuple(int(d) for d in np.broadcast_to(np.asarray(depth), lo.shape))
        if lo.shape != hi.shape:
            raise ValueError("domain bounds have different lengths")
        if np.any(lo >= hi):
            raise ValueError("domain box must have positive width on every axis")
        if sum(depth) > MAX_KEY_BITS:
            raise RefinementExhausted(f"total depth {sum(depth)} exceeds {MAX_KEY_BITS} key bits")
        for v in np.concatenate([lo, hi]):
            fv = Fraction(float(v)) * 2 ** _DOMAIN_BITS
            if fv.denominator != 1 or abs(v) >= 2.0 ** 20:
                raise ValueError(f"domain bound {v!r} is not a short dyadic number")
        for d in depth:
            if d < 0 or d + _DOMAIN_BITS + 21 > 53:
                raise RefinementExhausted(f"depth {d} outside the exactly representable range")
        self.lo = lo
        self.hi = hi
        self.depth = depth
        self.width = (hi - lo) / np.exp2(np.array(depth, dtype=float))
        self.shifts = np.array([sum(depth[k + 1:]) for k in range(len(depth))], dtype=np.int64)

    @classmethod
    def around(cls, box: IntervalBox, depth, pad_cells: float = 1.0) -> "Grid":
        """Dyadic grid whose domain contains ``box`` with ``pad_cells`` coarse cells spare."""
        d = np.broadcast_to(np.asarray(depth), box.lo.shape)
        cell = (box.hi - box.lo) / np.exp2(d)
        lo = [_round_dyadic(v, up=False) for v in box.lo - pad_cells * cell]
        hi = [_round_dyadic(v, up=True) for v in box.hi + pad_cells * cell]
        return cls(lo, hi, d)

    @property
    def dim(self) -> int:
        return len(self.depth)

    @property
    def shape(self):
        return tuple(1 << d for d in self.depth)

    @property
    def size(self) -> int:
        return int(np.prod([1 << d for d in self.depth], dtype=object))

    def domain(self) -> IntervalBox:
        return IntervalBox(self.lo, self.hi)

    def refined(self, axes=None) -> "Grid":
        axes = range(self.dim) if axes is None else axes
        depth = list(self.depth)
        for k in axes:
            depth[k] += 1
        return Grid(self.lo, self.hi, depth)

    def with_depth(self, depth) -> "Grid":
        return Grid(self.lo, self.hi, depth)

    def same_domain(self, other: "Grid") -> bool:
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.same_domain(other) and self.depth == other.depth

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes(), self.depth))

    def __repr__(self):
        return f"Grid(lo={self.lo.tolist()}, hi={self.hi.tolist()}, depth={self.depth})"

    # -- key <-> coordinates -------------------------------------------------------
    def keys_from_coords(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.dim)
        lim = np.array(self.shape, dtype=np.int64)
        if np.any(coords < 0) or np.any(coords >= lim):
            raise ValueError("cube coordinates outside the grid")
        return (coords << self.shifts).sum(axis=1)

    def coords_from_keys(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        masks = np.array([(1 << d) - 1 for d in self.depth], dtype=np.int64)
        return (keys[:, None] >> self.shifts) & masks

    def boxes(self, coords):
        """Exact closed cube boxes ``(lo, hi)`` for integer coordinates ``(N, dim)``."""
        c = np.asarray(coords, dtype=float)
        lo = self.lo + c * self.width
        hi = self.lo + (c + 1.0) * self.width
        return lo, hi


class CubicalSet:
    """A finite set of cubes of one grid, kept as sorted unique packed keys."""

    __slots__ = ("grid", "keys")

    def __init__(self, grid: Grid, keys=None, *, _sorted: bool = False):
        self.grid = grid
        if keys is None:
            keys = np.empty(0, dtype=np.int64)
        keys = np.asarray(keys, dtype=np.int64)
        self.keys = keys if _sorted else np.unique(keys)

    @classmethod
    def from_coords(cls, grid: Grid, coords) -> "CubicalSet":
        return cls(grid, grid.keys_from_coords(coords))

    def __len__(self):
        return int(self.keys.size)

    def __bool__(self):
        return self.keys.size > 0

    def __iter__(self):
        return iter(self.keys.tolist())

    def __eq__(self, other):
        if not isinstance(other, CubicalSet):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.keys, other.keys)

    def __repr__(self):
        return f"CubicalSet({len(self)} cubes, depth={self.grid.depth})"

    def coords(self) -> np.ndarray:
        return self.grid.coords_from_keys(self.keys)

    def boxes(self):
        return self.grid.boxes(self.coords())

    def hull(self) -> IntervalBox | None:
        if not self:
            return None
        lo, hi = self.boxes()
        return IntervalBox(lo.min(axis=0), hi.max(axis=0))

    def contains(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, max(self.keys.size - 1, 0))
        return (self.keys.size > 0) & (self.keys[idx] == keys) if self.keys.size else np.zeros(keys.shape, bool)

    def index_of(self, keys) -> np.ndarray:
        """Positions of ``keys`` in this set, ``-1`` where absent."""
        keys = np.asarray(keys, dtype=np.int64)
        if not self.keys.size:
            return np.full(keys.shape, -1, dtype=np.int64)
        idx = np.searchsorted(self.keys, keys)
        idx_c = np.minimum(idx, self.keys.size - 1)
        return np.where(self.keys[idx_c] == keys, idx_c, -1)

    def subset(self, mask) -> "CubicalSet":
        return CubicalSet(self.grid, self.keys[np.asarray(mask)], _sorted=True)

    def _check(self, other: "CubicalSet"):
        if self.grid != other.grid:
            raise ValueError("cube sets live on different grids")

    def union(self, other: "CubicalSet") -> "CubicalSet":
        self._check(other)
        return CubicalSet(self.grid, np.union1d(self.keys, other.keys), _sorted=True)

    def intersection(self, other: "CubicalSet") -> "CubicalSet":
        self._check(other)
        return CubicalSet(self.grid, np.intersect1d(self.keys, other.keys, assume_unique=True), _sorted=True)

    def difference(self, other: "CubicalSet") -> "CubicalSet":
        self._check(other)
        return CubicalSet(self.grid, np.setdiff1d(self.keys, other.keys, assume_unique=True), _sorted=True)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def dilate(self, radius: int = 1) -> "CubicalSet":
        """All grid cubes within ``radius`` lattice steps (the closed-cube collar)."""
        if not self:
            return self
        c = self.coords()
        offs = np.stack(np.meshgrid(*[np.arange(-radius, radius + 1)] * self.grid.dim,
                                    indexing="ij"), axis=-1).reshape(-1, self.grid.dim)
        lim = np.array(self.grid.shape)
        out = []
        for o in offs:
            n = c + o
            ok = np.all((n >= 0) & (n < lim), axis=1)
            out.append(self.grid.keys_from_coords(n[ok]))
        return CubicalSet(self.grid, np.concatenate(out))

    def boundary_cubes(self) -> "CubicalSet":
        """Cubes of the set having a lattice neighbour (8/26/..-connectivity) outside it."""
        if not self:
            return self
        outside = self.dilate(1).difference(self)
        return self.intersection(outside.dilate(1))

    def components(self) -> tuple[int, np.ndarray]:
        """Connected components under closed-cube contact (max-norm adjacency)."""
        n = len(self)
        if n == 0:
            return 0, np.empty(0, dtype=np.int64)
        src, dst = _adjacent_pairs(self, self)
        g = csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        return connected_components(g, directed=False)

    def project(self, axes) -> np.ndarray:
        """Unique integer coordinates on the chosen axes."""
        return np.unique(self.coords()[:, list(axes)], axis=0)


def _adjacent_pairs(a: CubicalSet, b: CubicalSet):
    """Index pairs ``(i, j)`` with cube ``a[i]`` touching cube ``b[j]`` (same grid)."""
    if a.grid != b.grid:
        raise ValueError("cube sets live on different grids")
    grid = a.grid
    c = a.coords()
    offs = np.stack(np.meshgrid(*[np.arange(-1, 2)] * grid.dim, indexing="ij"),
                    axis=-1).reshape(-1, grid.dim)
    lim = np.array(grid.shape)
    srcs, dsts = [], []
    base = np.arange(len(a))
    for o in offs:
        n = c + o
        ok = np.all((n >= 0) & (n < lim), axis=1)
        idx = b.index_of(grid.keys_from_coords(n[ok]))
        hit = idx >= 0
        srcs.append(base[ok][hit])
        dsts.append(idx[hit])
    return np.concatenate(srcs), np.concatenate(dsts)


def full_set(grid: Grid) -> CubicalSet:
    if grid.size > 1 << 26:
        raise RefinementExhausted(f"refusing to materialize {grid.size} cubes")
    return CubicalSet(grid, np.arange(grid.size, dtype=np.int64), _sorted=True)


@njit(cache=True)
def _index_range(lo_k, hi_k, dom_lo, w, n):
    """Inclusive range of cube indices along one axis meeting ``[lo_k, hi_k]``."""
    t_lo = np.nextafter(np.nextafter(lo_k - dom_lo, -np.inf) / w, -np.inf)
    t_hi = np.nextafter(np.nextafter(hi_k - dom_lo, np.inf) / w, np.inf)
    a = math.ceil(t_lo) - 1
    b = math.floor(t_hi)
    if a < 0:
        a = 0
    if b > n - 1:
        b = n - 1
    return a, b


def cover(grid: Grid, box: IntervalBox) -> tuple[CubicalSet, bool]:
    """Cubes meeting ``box``; the flag says whether ``box`` was clipped to the domain."""
    if box.dim != grid.dim:
        raise ValueError("box and grid dimensions differ")
    clipped = not grid.domain().contains(box)
    ranges = []
    for k in range(grid.dim):
        a, b = _index_range(box.lo[k], box.hi[k], grid.lo[k], grid.width[k], 1 << grid.depth[k])
        if a > b or box.hi[k] < grid.lo[k] or box.lo[k] > grid.hi[k]:
            return CubicalSet(grid), True
        ranges.append(np.arange(a, b + 1))
    mesh = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, grid.dim)
    return CubicalSet.from_coords(grid, mesh), clipped


@njit(cache=True)
def _build_edges(keys, img_lo, img_hi, dom_lo, dom_hi, w, nper, shifts, max_edges):
    n, d = img_lo.shape
    indptr = np.zeros(n + 1, dtype=np.int64)
    cap = max(16, 8 * n)
    indices = np.empty(cap, dtype=np.int64)
    escape = np.zeros(n, dtype=np.bool_)
    klo = np.empty(d, dtype=np.int64)
    khi = np.empty(d, dtype=np.int64)
    ctr = np.empty(d, dtype=np.int64)
    m = 0
    for i in range(n):
        empty = False
        cand = 1
        for k in range(d):
            if img_lo[i, k] < dom_lo[k] or img_hi[i, k] > dom_hi[k]:
                escape[i] = True
            if img_hi[i, k] < dom_lo[k] or img_lo[i, k] > dom_hi[k]:
                empty = True
                break
            a, b = _index_range(img_lo[i, k], img_hi[i, k], dom_lo[k], w[k], nper[k])
            if a > b:
                empty = True
                break
            klo[k] = a
            khi[k] = b
            cand *= b - a + 1
        if empty:
            escape[i] = True
            indptr[i + 1] = m
            continue
        hits = 0
        for k in range(d):
            ctr[k] = klo[k]
        pos = 0
        while True:
            prefix = 0
            for k in range(d - 1):
                prefix += ctr[k] << shifts[k]
            start = prefix + klo[d - 1]
            stop = prefix + khi[d - 1]
            j = pos + np.searchsorted(keys[pos:], start)
            while j < keys.shape[0] and keys[j] <= stop:
                if m >= max_edges:
                    return indptr, indices[:0].copy(), escape, False
                if m >= indices.shape[0]:
                    grown = np.empty(2 * indices.shape[0], dtype=np.int64)
                    grown[:m] = indices[:m]
                    indices = grown
                indices[m] = j
                m += 1
                hits += 1
                j += 1
            pos = j
            # odometer over axes 0..d-2
            k = d - 2
            while k >= 0:
                ctr[k] += 1
                if ctr[k] <= khi[k]:
                    break
                ctr[k] = klo[k]
                k -= 1
            if k < 0:
                break
        if hits < cand:
            escape[i] = True
        indptr[i + 1] = m
    return indptr, indices[:m].copy(), escape, True


class TransitionGraph:
    """Directed graph on the cubes of ``vertices`` in CSR form.

    ``escape[i]`` marks cubes whose image meets something outside the vertex
    set (other cubes or the exterior of the domain): the escape sink.
    """

    def __init__(self, vertices: CubicalSet, indptr, indices, escape=None):
        self.vertices = vertices
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        n = len(vertices)
        self.escape = np.zeros(n, dtype=bool) if escape is None else np.asarray(escape, dtype=bool)
        if self.indptr.size != n + 1:
            raise ValueError("indptr length does not match the vertex count")

    @classmethod
    def from_edges(cls, vertices: CubicalSet, src, dst, escape=None) -> "TransitionGraph":
        n = len(vertices)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        keep = np.ones(src.size, dtype=bool)
        keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        src, dst = src[keep], dst[keep]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return cls(vertices, np.cumsum(indptr), dst, escape)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return int(self.indices.size)

    def successors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edge_arrays(self):
        src = np.repeat(np.arange(self.n_vertices), np.diff(self.indptr))
        return src, self.indices

    def matrix(self) -> csr_matrix:
        n = self.n_vertices
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def restrict(self, mask) -> "TransitionGraph":
        """Induced subgraph on the vertices selected by ``mask``."""
        mask = np.asarray(mask, dtype=bool)
        new_index = np.cumsum(mask) - 1
        src, dst = self.edge_arrays()
        keep = mask[src] & mask[dst]
        lost = np.zeros(self.n_vertices, dtype=bool)
        np.logical_or.at(lost, src[mask[src] & ~mask[dst]], True)
        esc = (self.escape | lost)[mask]
        return TransitionGraph.from_edges(self.vertices.subset(mask), new_index[src[keep]],
                                          new_index[dst[keep]], esc)


def build_graph(S: CubicalSet, f, max_edges: int | None = None) -> TransitionGraph:
    """Outer-approximation graph of the box map ``f`` restricted to ``S``.

    ``f(lo, hi)`` maps arrays of boxes ``(N, dim)`` to enclosures of their images.
    Raises :class:`RefinementExhausted` if the graph would exceed ``max_edges``.
    """
    grid = S.grid
    if not S:
        return TransitionGraph(S, np.zeros(1, dtype=np.int64), np.empty(0, dtype=np.int64))
    lo, hi = S.boxes()
    ilo, ihi = f(lo, hi)
    ilo = np.ascontiguousarray(ilo, dtype=float)
    ihi = np.ascontiguousarray(ihi, dtype=float)
    nper = np.array(grid.shape, dtype=np.int64)
    cap = np.iinfo(np.int64).max if max_edges is None else int(max_edges)
    indptr, indices, escape, ok = _build_edges(S.keys, ilo, ihi, grid.lo, grid.hi, grid.width,
                                               nper, grid.shifts, cap)
    if not ok:
        raise RefinementExhausted(f"transition graph exceeds the edge budget {max_edges}")
    return TransitionGraph(S, indptr, indices, escape)


def scc(g: TransitionGraph) -> list[np.ndarray]:
    """Strongly connected components, each sorted, ordered by smallest vertex."""
    n = g.n_vertices
    if n == 0:
        return []
    _, labels = connected_components(g.matrix(), directed=True, connection="strong")
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    comps = np.split(order, splits)
    comps.sort(key=lambda c: c[0])
    return comps


def _recurrent_mask(g: TransitionGraph) -> np.ndarray:
    n = g.n_vertices
    if n == 0:
        return np.zeros(0, dtype=bool)
    _, labels = connected_components(g.matrix(), directed=True, connection="strong")
    sizes = np.bincount(labels)
    rec = sizes[labels] > 1
    src, dst = g.edge_arrays()
    loops = src[src == dst]
    rec[loops] = True
    return rec


@njit(cache=True)
def _reach(indptr, indices, seeds):
    n = indptr.size - 1
    seen = seeds.copy()
    stack = np.flatnonzero(seeds)
    stack_buf = np.empty(n, dtype=np.int64)
    top = stack.size
    stack_buf[:top] = stack
    while top > 0:
        top -= 1
        u = stack_buf[top]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if not seen[v]:
                seen[v] = True
                stack_buf[top] = v
                top += 1
    return seen


def chain_recurrent_mask(g: TransitionGraph) -> np.ndarray:
    return _recurrent_mask(g)


def inv_mask(g: TransitionGraph) -> np.ndarray:
    """Vertices on a bi-infinite path: reachable from and co-reachable to a cycle."""
    rec = _recurrent_mask(g)
    if not rec.any():
        return rec
    fwd = _reach(g.indptr, g.indices, rec)
    t = g.matrix().T.tocsr()
    bwd = _reach(t.indptr.astype(np.int64), t.indices.astype(np.int64), rec)
    return fwd & bwd


def chain_recurrent_vertices(g: TransitionGraph) -> CubicalSet:
    return g.vertices.subset(_recurrent_mask(g))


def inv_vertices(g: TransitionGraph) -> CubicalSet:
    return g.vertices.subset(inv_mask(g))


def subdivide(S: CubicalSet, axes=None, max_depth: int = 24) -> CubicalSet:
    """Replace every cube by its ``2**len(axes)`` children."""
    grid = S.grid
    axes = list(range(grid.dim)) if axes is None else list(axes)
    if any(grid.depth[k] + 1 > max_depth for k in axes):
        raise RefinementExhausted(f"depth limit {max_depth} reached")
    new = grid.refined(axes)
    c = S.coords() * np.array([2 if k in axes else 1 for k in range(grid.dim)])
    bits = np.stack(np.meshgrid(*[[0, 1]] * len(axes), indexing="ij"), axis=-1).reshape(-1, len(axes))
    offs = np.zeros((bits.shape[0], grid.dim), dtype=np.int64)
    offs[:, axes] = bits
    children = (c[:, None, :] + offs[None, :, :]).reshape(-1, grid.dim)
    return CubicalSet.from_coords(new, children)


_PRUNERS = {"chain_recurrent": chain_recurrent_vertices, "inv": inv_vertices}


def refine_loop(S: CubicalSet, f, rounds: int, prune: str = "chain_recurrent",
                prune_first: bool = True, max_cubes: int | None = None,
                max_depth: int = 24, history: list | None = None,
                max_edges: int | None = None) -> CubicalSet:
    """Alternate pruning with subdivision, ``rounds`` subdivisions in total.

    Each stage is an outer enclosure of the invariant object (chain recurrent
    set or maximal invariant set) at the current depth.
    """
    pruner = _PRUNERS[prune]
    if prune_first:
        S = pruner(build_graph(S, f, max_edges))
        if history is not None:
            history.append(len(S))
    for _ in range(rounds):
        if max_cubes is not None and len(S) * 2 ** S.grid.dim > max_cubes:
            raise RefinementExhausted(
                f"next subdivision would need {len(S) * 2 ** S.grid.dim} cubes > budget {max_cubes}")
        S = subdivide(S, max_depth=max_depth)
        S = pruner(build_graph(S, f, max_edges))
        if history is not None:
            history.append(len(S))
    return S


# -- persistence ----------------------------------------------------------------------

_HEADER = "# horseshoe cubical set v1"


def save_cubes(S: CubicalSet, path) -> None:
    """Text format: header, dims, depths, exact domain, then one cube per line."""
    g = S.grid
    lines = [_HEADER, f"dims {g.dim}", "depths " + " ".join(map(str, g.depth))]
    lines.append("domain " + " ".join(f"[{l!r}, {h!r}]" for l, h in zip(g.lo.tolist(), g.hi.tolist())))
    lines.append(f"count {len(S)}")
    coords = S.coords()
    lines.extend(" ".join(map(str, row)) for row in coords.tolist())
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_domain(text: str):
    parts = text.replace("[", " ").replace("]", " ").replace(",", " ").split()
    vals = [float(p) for p in parts]
    return vals[0::2], vals[1::2]


def load_cubes(path) -> CubicalSet:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != _HEADER:
        raise ValueError(f"{path}: not a cubical set file")
    fields = {}
    body_start = None
    for i, line in enumerate(lines[1:], start=1):
        key, _, rest = line.partition(" ")
        fields[key] = rest
        if key == "count":
            body_start = i + 1
            break
    dim = int(fields["dims"])
    depth = [int(t) for t in fields["depths"].split()]
    lo, hi = _parse_domain(fields["domain"])
    grid = Grid(lo, hi, depth)
    count = int(fields["count"])
    body = [ln for ln in lines[body_start:] if ln.strip()]
    if len(body) != count:
        raise ValueError(f"{path}: expected {count} cubes, found {len(body)}")
    coords = np.array([[int(t) for t in ln.split()] for ln in body], dtype=np.int64).reshape(-1, dim)
    return CubicalSet.from_coords(grid, coords)
