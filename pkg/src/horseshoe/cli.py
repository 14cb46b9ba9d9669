"""Command-line driver: ``horseshoe <subcommand> ...``.

Exit codes: 0 success or certified, 1 error (or a failed check), 2 rigorous
unknown, 3 refinement exhausted.  Every subcommand prints a short text report;
``--json`` prints the full run report instead.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

from .cubical import RefinementExhausted, save_cubes
from .henon import COMPLEX, REAL, Param
from .hyperbolicity import (
    Budgets,
    enclose_chain_recurrent,
    save_sweep,
    sweep_params,
    verify_quasi_hyperbolic,
)
from .interval import IntervalError, from_decimal
from .monodromy import ParamLoop, ParamPath, compute_monodromy, monodromy_of, save_track
from .periodic import count_real, crosscheck_pruning, save_certificates
from .shift import PAPER_NS, PAPER_TABLE, SFT, count_fixed, format_table, table

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN, EXIT_EXHAUSTED = 0, 1, 2, 3

BUILTIN_LOOPS = ("gamma_s",)


class UsageError(ValueError):
    pass


# -- parsing helpers ------------------------------------------------------------------

def parse_interval(text: str):
    """``"1"``, ``"-5.46875:-5.3125"`` or ``"[lo,hi]"``, read outward from decimal."""
    t = str(text).strip().strip("[]")
    for sep in (":", ","):
        if sep in t:
            lo, hi = (s.strip() for s in t.split(sep, 1))
            break
    else:
        lo = hi = t
    try:
        return from_decimal(lo, hi)
    except (ValueError, ArithmeticError, IntervalError) as exc:
        raise UsageError(f"bad interval {text!r}: {exc}") from exc


def param_from_args(args, mode=None) -> Param:
    ivs = [parse_interval(getattr(args, k)) for k in ("a", "a_im", "c", "c_im")]
    if mode is None:
        real = all(iv.lo == iv.hi == 0.0 for iv in (ivs[1], ivs[3]))
        mode = REAL if real else COMPLEX
    try:
        return Param(*ivs, mode)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from exc


def parse_range(text: str) -> list[int]:
    """``"3..7"``, ``"3-7"`` or ``"3,5,7"``."""
    t = str(text).replace("-", "..")
    try:
        if ".." in t:
            lo, hi = t.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(v) for v in t.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc
    if not out or min(out) < 1:
        raise UsageError(f"bad range {text!r}")
    return out


def read_region(path) -> list[Param]:
    """Region file: one box per line, ``a_re a_im c_re c_im`` as intervals; ``#`` comments."""
    boxes = []
    for k, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise UsageError(f"{path}:{k}: expected four intervals, got {len(parts)}")
        ivs = [parse_interval(s) for s in parts]
        try:
            boxes.append(Param(*ivs, COMPLEX))
        except (ValueError, ArithmeticError) as exc:
            raise UsageError(f"{path}:{k}: {exc}") from exc
    return boxes


def resolve_loop(spec: str):
    """The loop and its reference path (``None`` if the loop names none)."""
    if spec in BUILTIN_LOOPS:
        base = resources.files("horseshoe") / "data"
        loop = ParamLoop.loads((base / f"{spec}.loop").read_text())
    else:
        loop = ParamLoop.load(spec)
        base = Path(spec).parent
    ref = ParamPath.loads((base / loop.reference).read_text()) if loop.reference else None
    return loop, ref


def budgets_from_args(args, mode) -> Budgets:
    if args.zero_budget:
        return Budgets.zero()
    kw = {}
    for name in ("max_cubes", "max_edges", "max_work", "wall_time", "max_base_rounds"):
        v = getattr(args, name)
        if v is not None:
            kw[name] = v
    if args.fiber_depths:
        kw["fiber_depths"] = tuple(parse_range(args.fiber_depths))
    return Budgets.for_mode(mode, **kw)


# -- subcommands ----------------------------------------------------------------------

def cmd_verify(args, report):
    mode = args.mode
    p = param_from_args(args, mode)
    rep = verify_quasi_hyperbolic(p, budgets=budgets_from_args(args, p.mode), collar=args.collar)
    report["outcome"] = rep.status
    report["result"] = rep.to_dict()
    report["claim"] = "hyperbolicity.verify_quasi_hyperbolic"
    print(rep.summary())
    if args.out:
        Path(args.out).write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
        report["artifacts"].append(args.out)
    return EXIT_OK if rep.certified else EXIT_UNKNOWN


def cmd_sweep(args, report):
    region = read_region(args.region)
    b = budgets_from_args(args, args.mode)
    res = sweep_params(region, args.mode, args.max_param_depth, b,
                       symmetry=not args.no_symmetry, workers=args.workers)
    report["outcome"] = "all certified" if not res.unknown else f"{len(res.unknown)} unknown"
    report["result"] = {"certified": len(res.certified), "unknown": len(res.unknown),
                        "symmetry_halving": res.symmetric}
    report["claim"] = "hyperbolicity.sweep_params"
    print(f"certified boxes: {len(res.certified)}  unknown boxes: {len(res.unknown)}"
          + ("  (Im c >= 0 half computed, mirrors by conjugation)" if res.symmetric else ""))
    save_sweep(res, args.out)
    report["artifacts"].append(args.out)
    return EXIT_OK if not res.unknown else EXIT_UNKNOWN


def cmd_cr_enclose(args, report):
    p = param_from_args(args, args.mode)
    hist = []
    S = enclose_chain_recurrent(p, rounds=args.rounds, max_cubes=args.max_cubes, history=hist)
    save_cubes(S, args.out)
    report["outcome"] = f"{len(S)} cubes"
    report["result"] = {"cubes": len(S), "depth": list(S.grid.depth), "history": hist}
    report["claim"] = "hyperbolicity.enclose_chain_recurrent"
    report["artifacts"].append(args.out)
    print(f"{len(S)} cubes at depth {S.grid.depth}; history {hist}")
    return EXIT_OK


def cmd_monodromy(args, report):
    loop, ref = resolve_loop(args.loop)
    if args.no_reference:
        ref = None

    def log(entry):
        print(f"{entry['path']}: n_steps={entry['n_steps']} depth={entry['depth']}: "
              f"{entry['outcome']} ({entry['seconds']}s)", flush=True)

    track, swaps, attempts = compute_monodromy(
        loop, args.n_steps, args.depth, max_steps=args.max_steps, max_depth=args.max_depth,
        itinerary_depth=args.itinerary_depth, reference=ref,
        reference_steps=args.reference_steps, log=log)
    auto = monodromy_of(swaps)
    words = " ; ".join(f"{u} <-> {v}" for u, v in swaps.undotted()) or "identity"
    print(words)
    print(f"dotted: {swaps}")
    report["outcome"] = words
    report["result"] = {"pairs": swaps.pairs, "attempts": attempts, "automorphism_radius": auto.radius,
                        "changed_cubes": swaps.changed_cubes}
    report["claim"] = "monodromy.continue_partition + monodromy.identify_swapped_blocks"
    if args.track_dir:
        report["artifacts"].append(str(save_track(track, swaps, args.track_dir)))
    return EXIT_OK


def cmd_sft(args, report):
    ns = parse_range(args.n)
    if args.paper:
        tab = table(ns=ns)
        print(format_table(tab, ns))
        ok = ns == list(PAPER_NS) and all(tab[k] == PAPER_TABLE[k] for k in PAPER_TABLE)
        report["result"] = tab
        report["outcome"] = "matches published table" if ok else "computed"
        return EXIT_OK
    sft = SFT(args.words)
    counts = [count_fixed(sft, n) for n in ns]
    print(" ".join(map(str, counts)))
    report["outcome"] = counts
    report["result"] = {"forbidden": list(sft.forbidden), "n": ns, "counts": counts}
    report["claim"] = "shift.count_fixed"
    return EXIT_OK


def cmd_count(args, report):
    p = param_from_args(args, REAL)
    reps = []
    for n in parse_range(args.n):
        rep = count_real(p, n)
        reps.append(rep)
        print(rep.line(), flush=True)
    report["result"] = [{"n": r.n, "lower": r.lower_real, "upper": r.upper_real} for r in reps]
    report["claim"] = "periodic.count_real (Krawczyk certificates)"
    report["outcome"] = "exact" if all(r.exact for r in reps) else "inexact"
    if args.out:
        save_certificates(reps, args.out)
        report["artifacts"].append(args.out)
    return EXIT_OK if all(r.exact for r in reps) else EXIT_UNKNOWN


def cmd_pruning_check(args, report):
    p = param_from_args(args, REAL)
    chk = crosscheck_pruning(p, SFT(args.words), parse_range(args.n))
    for n, got, want, verdict in chk.rows:
        print(f"n={n}: certified {got}  sft {want}  {verdict}")
    print(chk.verdict)
    report["outcome"] = chk.verdict
    report["result"] = [list(r) for r in chk.rows]
    report["claim"] = "periodic.crosscheck_pruning"
    return {"pass": EXIT_OK, "fail": EXIT_ERROR}.get(chk.verdict, EXIT_UNKNOWN)


def cmd_render(args, report):
    from .render import render_artifact

    kind = render_artifact(args.artifact, args.out, axes=tuple(args.axes) if args.axes else None,
                           slice_index=args.slice)
    print(f"rendered {kind} to {args.out}")
    report["outcome"] = kind
    report["artifacts"].append(args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _add_param(p, mode_default=None):
    p.add_argument("--a", default="1", help="a (real part): decimal or lo:hi")
    p.add_argument("--a-im", default="0", help="Im a: decimal or lo:hi")
    p.add_argument("--c", required=False, default=None, help="c (real part): decimal or lo:hi")
    p.add_argument("--c-im", default="0", help="Im c: decimal or lo:hi")
    if mode_default is not False:
        p.add_argument("--mode", choices=(REAL, COMPLEX), default=mode_default)


def _add_budgets(p):
    p.add_argument("--max-cubes", type=int)
    p.add_argument("--max-edges", type=int)
    p.add_argument("--max-work", type=float)
    p.add_argument("--wall-time", type=float, help="seconds")
    p.add_argument("--max-base-rounds", type=int)
    p.add_argument("--fiber-depths", help="e.g. 2..4")
    p.add_argument("--zero-budget", action="store_true", help="refuse all work (yields Unknown)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="horseshoe", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file of option defaults for the subcommand")
    ap.add_argument("--json", action="store_true", help="print the run report as JSON")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="certify quasi-hyperbolicity of a parameter box")
    _add_param(p)
    _add_budgets(p)
    p.add_argument("--collar", action="store_true")
    p.add_argument("--out", help="write the verify report (JSON)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="certify a region of parameter boxes")
    p.add_argument("region", help="region file: one 'a_re a_im c_re c_im' box per line")
    p.add_argument("--mode", choices=(REAL, COMPLEX), default=COMPLEX)
    p.add_argument("--max-param-depth", type=int, default=2)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="sweep.json")
    _add_budgets(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cr-enclose", help="cubical enclosure of the chain recurrent set")
    _add_param(p)
    p.add_argument("--rounds", type=int, default=6)
    p.add_argument("--max-cubes", type=int)
    p.add_argument("--out", default="cr.cubes")
    p.set_defaults(func=cmd_cr_enclose)

    p = sub.add_parser("monodromy", help="monodromy of the coding along a loop")
    p.add_argument("loop", help="loop file or a built-in name: " + ", ".join(BUILTIN_LOOPS))
    p.add_argument("--n-steps", type=int, default=64)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--reference-steps", type=int, default=128,
                   help="first n_steps tried on the reference path")
    p.add_argument("--max-steps", type=int, default=256)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--itinerary-depth", type=int, default=6)
    p.add_argument("--track-dir", help="dump slices and labels here")
    p.add_argument("--no-reference", action="store_true",
                   help="report words in the loop basepoint's own Re y coding")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("sft", help="periodic-point counts of a subshift of finite type")
    p.add_argument("words", nargs="*", help="forbidden words")
    p.add_argument("--n", default="3..7")
    p.add_argument("--paper", action="store_true", help="print all published columns")
    p.set_defaults(func=cmd_sft)

    p = sub.add_parser("count", help="certified count of real points of period n")
    _add_param(p, mode_default=False)
    p.add_argument("--n", default="3..7")
    p.add_argument("--out", help="write certificates (JSON)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("pruning-check", help="certified counts against SFT counts")
    _add_param(p, mode_default=False)
    p.add_argument("words", nargs="*", help="forbidden words")
    p.add_argument("--n", default="3..7")
    p.set_defaults(func=cmd_pruning_check)

    p = sub.add_parser("render", help="static SVG of a sweep, cube set or track slice")
    p.add_argument("artifact", help="sweep JSON, cube file, or track directory")
    p.add_argument("--out", default="figure.svg")
    p.add_argument("--axes", type=int, nargs=2, help="projection axes for cube sets")
    p.add_argument("--slice", type=int, default=0, help="track slice index")
    p.set_defaults(func=cmd_render)
    return ap


def parse(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        sub = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
        sub.choices[args.cmd].set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = ap.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = parse(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # argparse usage errors
        return EXIT_ERROR if exc.code else EXIT_OK
    config = {k: v for k, v in vars(args).items() if k != "func"}
    report = {"command": args.cmd, "config": config, "outcome": None, "artifacts": []}
    t0 = time.monotonic()
    try:
        if getattr(args, "c", "x") is None:
            raise UsageError("--c is required")
        code = args.func(args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ERROR
        report["outcome"] = f"error: {exc}"
    except RefinementExhausted as exc:
        print(f"refinement exhausted: {exc}", file=sys.stderr)
        code = EXIT_EXHAUSTED
        report["outcome"] = f"refinement exhausted: {exc}"
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ERROR
        report["outcome"] = f"error: {exc}"
    report["seconds"] = round(time.monotonic() - t0, 3)
    report["exit_code"] = code
    if args.json:
        print(json.dumps(report, indent=1, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
