"""Loops, continuation of the Re y partition, and swapped-block identification."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horseshoe.cubical import CubicalSet, Grid, subdivide
from horseshoe.henon import Param
from horseshoe.monodromy import (
    LoopError, ParamLoop, ParamPath, RefineNeeded, SwapResult, _lift, coding_change,
    continue_partition, enclose_K_over, gamma_empty, identify_swapped_blocks,
    initial_partition, load_track, loop_grid, monodromy_of, save_track,
)
from horseshoe.shift import FLIP, Automorphism, BlockSwap, apply

GRID8 = Grid([-8.0] * 4, [8.0] * 4, 6)


def covers(S, pt):
    lo, hi = S.boxes()
    return np.all((lo <= pt) & (pt <= hi), axis=1)


# -- loop files ------------------------------------------------------------------------

def test_loop_round_trip_and_format():
    loop = ParamLoop.from_points([(1, -10), (1, (-10, "0.5")), (1, -9), (1, (-10, "-0.5")), (1, -10)],
                                 times=[0, "1/4", "1/2", "3/4", 1], symmetric=True, name="tiny",
                                 coarsen=[1, 0, 0, 1])
    text = loop.dumps()
    assert text.startswith("# horseshoe loop v1\n")
    assert "0.25 1 0 -10 0.5 0" in text
    back = ParamLoop.loads(text)
    assert back == loop and back.coarsen == (1, 0, 0, 1)
    assert back.slice_depths(4, 7) == [6, 7, 7, 6]
    assert back.slice_depths(2, 7) == [7, 7]


@given(st.lists(st.tuples(st.fractions(-20, 20, max_denominator=1000),
                          st.fractions(-20, 20, max_denominator=1000)), min_size=1, max_size=6))
def test_path_round_trip_property(pts):
    pts = [(1, (-10, 0))] + [((a, 0), (c, 0)) for a, c in pts]
    times = [Fraction(k, len(pts) - 1) for k in range(len(pts))]
    path = ParamPath.from_points(pts, times=times)
    assert ParamPath.loads(path.dumps()) == path


def test_loop_validation():
    with pytest.raises(LoopError):  # not closed
        ParamLoop.from_points([(1, -10), (1, -9)])
    with pytest.raises(LoopError):  # time marks not increasing
        ParamPath.from_points([(1, -10), (1, -9), (1, -8)], times=[0, "1/2", "1/2"])
    with pytest.raises(LoopError):  # no vertex at t = 1/2
        ParamLoop.from_points([(1, -10), (1, (-10, 1)), (1, (-10, -1)), (1, -10)],
                              times=[0, "1/3", "2/3", 1], symmetric=True)
    with pytest.raises(LoopError):  # not mirrored
        ParamLoop.from_points([(1, -10), (1, (-10, 1)), (1, -9), (1, (-10, 1)), (1, -10)],
                              times=[0, "1/4", "1/2", "3/4", 1], symmetric=True)
    with pytest.raises(LoopError):  # coarsening not mirrored
        ParamLoop.from_points([(1, -10), (1, -9), (1, -10)], times=[0, "1/2", 1],
                              symmetric=True, coarsen=[1, 0])
    with pytest.raises(LoopError):
        ParamLoop.loads("# not a loop\n")


def test_shipped_loop_is_symmetric_and_based_in_dn():
    from horseshoe.cli import resolve_loop
    loop, ref = resolve_loop("gamma_s")
    assert loop.symmetric and loop.vertices[0] == loop.vertices[-1]
    assert ref is not None and ref.endpoint == loop.basepoint
    assert ref.basepoint == (1, 0, -10, 0)
    assert loop_grid(loop, 8).hi[0] == 4.0


# -- enclosures and the initial partition ----------------------------------------------

def test_enclosure_contains_real_fixed_points():
    S = enclose_K_over(Param.make(1, -10), GRID8)
    for x in (1 + math.sqrt(11), 1 - math.sqrt(11)):
        assert covers(S, np.array([x, 0.0, x, 0.0])).any()


def test_enclosure_misses_real_plane_in_emp_hov():
    # a = 1, c = 10: K is nonempty but disjoint from R^2
    S = enclose_K_over(Param.make(1, 10), GRID8.with_depth(7))
    assert S
    lo, hi = S.boxes()
    real_plane = (lo[:, 1] <= 0) & (hi[:, 1] >= 0) & (lo[:, 3] <= 0) & (hi[:, 3] >= 0)
    assert not real_plane.any()


def test_initial_partition_signs():
    S = enclose_K_over(Param.make(1, -10), GRID8)
    lab = initial_partition(S)
    assert set(lab.tolist()) == {0, 1}
    neg, pos = 1 - math.sqrt(11), 1 + math.sqrt(11)
    assert np.all(lab[covers(S, np.array([neg, 0, neg, 0]))] == 0)
    assert np.all(lab[covers(S, np.array([pos, 0, pos, 0]))] == 1)


def test_initial_partition_too_coarse():
    S = enclose_K_over(Param.make(1, -10), GRID8.with_depth(1), depth0=1)
    with pytest.raises(RefineNeeded):
        initial_partition(S)


# -- continuation ---------------------------------------------------------------------

def test_constant_loop_keeps_labels(tmp_path):
    loop = ParamLoop.constant(1, -10)
    tr = continue_partition(loop, 2, 6)
    assert np.array_equal(tr.labels[0], tr.labels[-1])
    sw = identify_swapped_blocks(tr, 4)
    assert sw.pairs == [] and str(sw) == "identity"
    assert monodromy_of(sw).atoms == ()
    save_track(tr, sw, tmp_path / "t")
    back = load_track(tmp_path / "t")
    assert all(a == b for a, b in zip(back.slices, tr.slices))
    assert all(np.array_equal(a, b) for a, b in zip(back.labels, tr.labels))


def test_mixed_depth_constant_loop():
    loop = ParamLoop.from_points([(1, -10)] * 5, times=[0, "1/4", "1/2", "3/4", 1],
                                 symmetric=True, coarsen=[1, 0, 0, 1])
    tr = continue_partition(loop, 4, 6)
    assert [S.grid.depth[0] for S in tr.slices] == [5, 6, 6, 5]
    assert identify_swapped_blocks(tr, 4).pairs == []


def test_lift_children_inherit():
    g = Grid([-1.0] * 2, [1.0] * 2, 2)
    S = CubicalSet.from_coords(g, [[0, 0], [1, 2], [3, 3]])
    T, vals = _lift(S, np.array([5, 6, 7]), 4)
    assert T == subdivide(subdivide(S))
    parents = S.index_of(g.keys_from_coords(T.coords() >> 2))
    assert np.array_equal(vals, np.array([5, 6, 7])[parents])


def test_single_step_on_shipped_loop_needs_refinement():
    from horseshoe.cli import resolve_loop
    loop, _ = resolve_loop("gamma_s")
    with pytest.raises(RefineNeeded):
        continue_partition(loop, 1, 7, max_edges=30_000_000)


def test_basepoint_outside_dn_rejected():
    with pytest.raises(LoopError):
        continue_partition(ParamLoop.constant(1, -5), 2, 5)


def test_short_path_in_dn_keeps_coding():
    path = ParamPath.from_points([(1, -10), (1, -11)])
    tr = continue_partition(path, 2, 6)
    assert coding_change(tr).atoms == ()


# -- swaps and automorphisms -----------------------------------------------------------

def test_recoding_by_flip():
    sw = SwapResult([("10.01", "11.01")], 640, (1, 2))
    assert sw.recoded(Automorphism([FLIP])).pairs == [("00.10", "01.10")]
    assert sw.recoded(Automorphism([])).pairs == sw.pairs
    assert sw.undotted() == [("1001", "1101")]


def test_monodromy_of_paper_swap():
    auto = monodromy_of(SwapResult([("0010.100", "0011.100")]))
    (atom,) = auto.atoms
    assert atom == BlockSwap("0010100", "0011100")
    assert apply(auto, "0011100") == "0"


def test_gamma_empty_involution():
    ff = gamma_empty().then(gamma_empty())
    for w in ("0", "01", "0110", "111000"):
        assert apply(gamma_empty(), w) != w
        assert apply(ff, w) == w
