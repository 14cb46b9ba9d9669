"""Cubical sets and transition graphs against brute-force oracles."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horseshoe.cubical import (
    CubicalSet,
    Grid,
    RefinementExhausted,
    TransitionGraph,
    _adjacent_pairs,
    build_graph,
    chain_recurrent_vertices,
    cover,
    full_set,
    inv_vertices,
    load_cubes,
    refine_loop,
    save_cubes,
    scc,
    subdivide,
)
from horseshoe.henon import HenonBoxMap, Param, fixed_points
from horseshoe.interval import IntervalBox


def random_graph(n, edges):
    S = CubicalSet(Grid([0.0], [float(max(n, 1))], 6), np.arange(n))
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    return TransitionGraph.from_edges(S, src, dst)


graphs = st.integers(1, 14).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                                             max_size=3 * n)))


def reach_closure(n, edges):
    R = np.eye(n, dtype=bool)
    for u, v in edges:
        R[u, v] = True
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def paths_exist(n, edges, length):
    """Boolean matrix: a path of exactly ``length`` edges from i to j."""
    A = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        A[u, v] = True
    P = np.eye(n, dtype=bool)
    for _ in range(length):
        P = (P.astype(int) @ A.astype(int)) > 0
    return P


@given(graphs)
def test_scc_matches_transitive_closure(g):
    n, edges = g
    R = reach_closure(n, edges)
    mutual = R & R.T
    label = {}
    for comp_id, comp in enumerate(scc(random_graph(n, edges))):
        for v in comp:
            label[int(v)] = comp_id
    for i in range(n):
        for j in range(n):
            assert (label[i] == label[j]) == bool(mutual[i, j])


@given(graphs)
def test_inv_is_vertices_on_bi_infinite_paths(g):
    n, edges = g
    # a vertex is on a bi-infinite path iff paths of length n leave it and reach it
    fwd = paths_exist(n, edges, n).any(axis=1)
    bwd = paths_exist(n, edges, n).any(axis=0)
    want = np.flatnonzero(fwd & bwd)
    got = inv_vertices(random_graph(n, edges)).keys
    assert got.tolist() == want.tolist()


@given(graphs)
def test_chain_recurrent_is_vertices_on_cycles(g):
    n, edges = g
    R = reach_closure(n, edges)
    A = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        A[u, v] = True
    on_cycle = [i for i in range(n) if (A[i] & R[:, i]).any()]
    assert chain_recurrent_vertices(random_graph(n, edges)).keys.tolist() == on_cycle


def test_grid_rejects_non_dyadic_domain():
    with pytest.raises(ValueError):
        Grid([0.1], [1.0], 3)


def test_cover_clips_and_flags():
    grid = Grid([0.0, 0.0], [1.0, 1.0], 2)
    S, clipped = cover(grid, IntervalBox([0.3, 0.3], [0.6, 0.6]))
    assert not clipped and len(S) == 4
    S, clipped = cover(grid, IntervalBox([0.9, -1.0], [2.0, 0.1]))
    assert clipped and len(S) == 1


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 0.3), st.floats(0, 0.3))
def test_cover_contains_every_meeting_cube(x, y, wx, wy):
    grid = Grid([0.0, 0.0], [1.0, 1.0], 3)
    box = IntervalBox([x, y], [x + wx, y + wy])
    S, _ = cover(grid, box)
    keys = set(S.keys.tolist())
    lo, hi = full_set(grid).boxes()
    for k in range(grid.size):
        meets = np.all(lo[k] <= box.hi) and np.all(hi[k] >= box.lo)
        assert meets == (k in keys)


@given(st.sets(st.integers(0, 63), max_size=30))
def test_components_match_flood_fill(cells):
    grid = Grid([0.0, 0.0], [8.0, 8.0], 3)
    S = CubicalSet(grid, sorted(cells))
    n, lab = S.components()
    coords = S.coords()
    # oracle: union-find over max-norm neighbours
    parent = list(range(len(S)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(len(S)):
        for j in range(len(S)):
            if np.max(np.abs(coords[i] - coords[j])) <= 1:
                parent[find(i)] = find(j)
    roots = [find(i) for i in range(len(S))]
    assert n == len(set(roots))
    for i in range(len(S)):
        for j in range(len(S)):
            assert (lab[i] == lab[j]) == (roots[i] == roots[j])


def test_adjacent_pairs_are_symmetric():
    grid = Grid([0.0, 0.0], [8.0, 8.0], 3)
    a = CubicalSet(grid, [0, 9, 20])
    b = CubicalSet(grid, [1, 18, 63])
    src, dst = _adjacent_pairs(a, b)
    back_src, back_dst = _adjacent_pairs(b, a)
    assert sorted(zip(src.tolist(), dst.tolist())) == sorted(zip(back_dst.tolist(), back_src.tolist()))


def test_subdivide_children_tile_parents():
    grid = Grid([-2.0, -2.0], [2.0, 2.0], 2)
    S = CubicalSet(grid, [3, 7])
    T = subdivide(S)
    assert len(T) == 8 and T.grid.depth == (3, 3)
    lo, hi = T.boxes()
    area = np.prod(hi - lo, axis=1).sum()
    plo, phi = S.boxes()
    assert area == np.prod(phi - plo, axis=1).sum()


def test_graph_edges_contain_exact_point_images():
    p = Param.make(1, -5.4)
    grid = Grid([-4.0, -4.0], [4.0, 4.0], 5)
    S = full_set(grid)
    g = build_graph(S, HenonBoxMap(p))
    rng = np.random.default_rng(3)
    lo, hi = S.boxes()
    for i in rng.integers(0, len(S), 200):
        t = rng.random(2)
        x, y = (Fraction(float(lo[i, k] + t[k] * (hi[i, k] - lo[i, k]))) for k in range(2))
        u, v = x * x + Fraction(p.c_re.lo) - y, x
        if not (-4 <= u <= 4 and -4 <= v <= 4):
            assert g.escape[i]
            continue
        succ = g.successors(i)
        blo, bhi = lo[succ], hi[succ]
        hit = np.any(np.all((blo <= np.array([float(u), float(v)])) &
                            (np.array([float(u), float(v)]) <= bhi), axis=1))
        assert hit


def test_edge_budget_raises():
    p = Param.make(1, -5.4)
    S = full_set(Grid([-4.0, -4.0], [4.0, 4.0], 5))
    with pytest.raises(RefinementExhausted):
        build_graph(S, HenonBoxMap(p), max_edges=100)


def test_inv_enclosure_keeps_fixed_points_and_shrinks():
    p = Param.make(1, -10)
    grid = Grid([-8.0, -8.0], [8.0, 8.0], 3)
    hist = []
    S = refine_loop(full_set(grid), HenonBoxMap(p), 4, prune="inv", history=hist)
    for x in fixed_points(1.0, -10.0):
        key = S.grid.keys_from_coords(np.floor((np.array([x.real] * 2) + 8) / S.grid.width).astype(int)[None])
        assert S.contains(key)[0]
    # each stage covers at most the area of the previous one
    areas = [h / 4 ** k for k, h in enumerate(hist)]
    assert all(b <= a for a, b in zip(areas, areas[1:]))


def test_cube_file_round_trip(tmp_path):
    grid = Grid([-4.0, -4.0, -4.0, -4.0], [4.0, 4.0, 4.0, 4.0], (3, 3, 3, 3))
    S = CubicalSet(grid, [0, 5, 4095, 77])
    save_cubes(S, tmp_path / "s.cubes")
    T = load_cubes(tmp_path / "s.cubes")
    assert T == S and np.array_equal(T.grid.lo, grid.lo)
