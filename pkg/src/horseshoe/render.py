"""Static SVG figures of sweep results, cube sets and track slices."""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import PatchCollection  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .cubical import CubicalSet, load_cubes  # noqa: E402
from .hyperbolicity import CERTIFIED, load_sweep  # noqa: E402

AXIS_NAMES = {2: ("x", "y"), 4: ("Re x", "Im x", "Re y", "Im y")}

# deterministic SVG output
plt.rcParams["svg.hashsalt"] = "horseshoe"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, out):
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)


def _rects(lo, hi, **kw):
    return PatchCollection([Rectangle((l0, l1), h0 - l0, h1 - l1) for (l0, l1), (h0, h1) in zip(lo, hi)],
                           **kw)


def _project(S: CubicalSet, axes):
    lo, hi = S.boxes()
    ax = list(axes)
    return lo[:, ax], hi[:, ax]


def render_sweep(path, out) -> str:
    res = load_sweep(path)
    fig, ax = plt.subplots(figsize=(5, 4))
    boxes = res.certified + res.unknown
    for group, color in ((res.certified, "0.35"), (res.unknown, "white")):
        if not group:
            continue
        real = all(p.c_im.lo == p.c_im.hi == 0.0 for p in boxes)
        if real:
            # real sweeps: a on the vertical axis, c on the horizontal one
            lo = [(float(p.c_re.lo), float(p.a_re.lo)) for p in group]
            hi = [(float(p.c_re.hi), float(p.a_re.hi)) for p in group]
        else:
            lo = [(float(p.c_re.lo), float(p.c_im.lo)) for p in group]
            hi = [(float(p.c_re.hi), float(p.c_im.hi)) for p in group]
        ax.add_collection(_rects(lo, hi, facecolor=color, edgecolor="black", linewidth=0.3))
    if boxes:
        ax.autoscale_view()
        real = all(p.c_im.lo == p.c_im.hi == 0.0 for p in boxes)
        ax.set_xlabel("Re c" if not real else "c")
        ax.set_ylabel("Im c" if not real else "a")
    ax.set_title(f"{len(res.certified)} {CERTIFIED.lower()}, {len(res.unknown)} unknown")
    _save(fig, out)
    return "sweep"


def render_cubes(S: CubicalSet, out, axes=None, colors=None, title="") -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    if S:
        axes = axes or ((0, 1) if S.grid.dim == 2 else (0, 2))
        names = AXIS_NAMES.get(S.grid.dim, tuple(f"z{k}" for k in range(S.grid.dim)))
        lo, hi = _project(S, axes)
        if colors is None:
            ax.add_collection(_rects(lo, hi, facecolor="0.3", edgecolor="none"))
        else:
            for lab, col in ((0, "tab:blue"), (1, "tab:red"), (-1, "0.7")):
                m = colors == lab
                if m.any():
                    ax.add_collection(_rects(lo[m], hi[m], facecolor=col, edgecolor="none"))
        ax.autoscale_view()
        ax.set_xlabel(names[axes[0]])
        ax.set_ylabel(names[axes[1]])
        ax.set_aspect("equal")
    ax.set_title(title)
    _save(fig, out)


def render_artifact(path, out, axes=None, slice_index=0) -> str:
    """Pick the renderer from the artifact's header; returns the artifact kind."""
    path = Path(path)
    if path.is_dir():
        path = path / "track.json"
    text = path.read_text() if path.stat().st_size else ""
    if not text.strip():
        fig, _ = plt.subplots(figsize=(5, 4))
        _save(fig, out)
        return "empty"
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        fmt = doc.get("format", "")
        if fmt.startswith("horseshoe sweep"):
            return render_sweep(path, out)
        if fmt.startswith("horseshoe track"):
            import numpy as np

            e = doc["slices"][slice_index]
            S = load_cubes(path.parent / e["cubes"])
            lab = np.array([int(v) for v in (path.parent / e["labels"]).read_text().split()], dtype=int)
            render_cubes(S, out, axes, colors=lab, title=f"slice {slice_index}: pieces 0 and 1")
            return "track"
        raise ValueError(f"{path}: unknown JSON artifact format {fmt!r}")
    render_cubes(load_cubes(path), out, axes)
    return "cubes"
