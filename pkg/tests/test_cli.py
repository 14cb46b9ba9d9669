"""Command-line driver: exit codes, reports and file round trips."""
import json

import pytest

from horseshoe.cli import (
    EXIT_ERROR, EXIT_EXHAUSTED, EXIT_OK, EXIT_UNKNOWN, UsageError, main, parse_interval,
    parse_range,
)
from horseshoe.cubical import load_cubes
from horseshoe.henon import REAL, Param
from horseshoe.hyperbolicity import enclose_chain_recurrent, load_sweep
from horseshoe.monodromy import ParamLoop
from horseshoe.periodic import load_certificates


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    iv = parse_interval("-5.46875:-5.3125")
    assert (iv.lo, iv.hi) == (-5.46875, -5.3125)
    iv = parse_interval("[0.1, 0.2]")
    assert iv.lo < 0.1 < 0.2 < iv.hi or (iv.lo <= 0.1 and 0.2 <= iv.hi)
    assert parse_range("3..7") == [3, 4, 5, 6, 7]
    assert parse_range("3,5") == [3, 5]
    for bad in ("x", "0..2"):
        with pytest.raises(UsageError):
            parse_range(bad)
    with pytest.raises(UsageError):
        parse_interval("2:1")


def test_verify_exit_codes(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, text, _ = run(capsys, "verify", "--a", "1", "--c=-10", "--mode", REAL, "--out", str(out))
    assert code == EXIT_OK and text.startswith("Certified")
    assert json.loads(out.read_text())["status"] == "Certified"
    code, text, _ = run(capsys, "verify", "--c=-10", "--zero-budget")
    assert code == EXIT_UNKNOWN and "budget" in text
    code, _, err = run(capsys, "verify", "--c=-9:-10")
    assert code == EXIT_ERROR and "error" in err
    code, _, _ = run(capsys, "verify")
    assert code == EXIT_ERROR
    code, _, _ = run(capsys, "no-such-command")
    assert code == EXIT_ERROR


def test_json_report_and_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": "3..5"}))
    code, text, _ = run(capsys, "--json", "--config", str(cfg), "sft", "0010", "0110")
    assert code == EXIT_OK
    first, rest = text.split("\n", 1)
    assert first == "2 8 12"
    rep = json.loads(rest)
    assert rep["command"] == "sft" and rep["outcome"] == [2, 8, 12]
    assert rep["claim"] == "shift.count_fixed" and rep["exit_code"] == 0
    assert rep["config"]["n"] == "3..5"


def test_sft_paper_and_words(capsys):
    code, text, _ = run(capsys, "sft", "0010100", "0011100", "--n", "3..7")
    assert code == EXIT_OK and text.strip() == "8 16 22 52 114"
    code, text, _ = run(capsys, "sft", "--paper")
    assert code == EXIT_OK
    rows = [ln.split() for ln in text.strip().splitlines()]
    assert rows[0] == ["n", "DN", "L_p", "L_q", "L_r", "L_s", "EMP"]
    assert rows[-1] == ["7", "128", "114", "72", "72", "44", "0"]


def test_sweep_empty_and_symmetric(capsys, tmp_path):
    region = tmp_path / "empty.txt"
    region.write_text("# nothing here\n\n")
    out = tmp_path / "empty.json"
    code, _, _ = run(capsys, "sweep", str(region), "--out", str(out))
    assert code == EXIT_OK
    res = load_sweep(out)
    assert res.certified == [] and res.unknown == []

    region = tmp_path / "sym.txt"
    region.write_text("1 0 -10.25:-9.75 -0.25:0.25\n")
    out = tmp_path / "sym.json"
    code, text, _ = run(capsys, "sweep", str(region), "--out", str(out), "--zero-budget",
                        "--max-param-depth", "0")
    assert code == EXIT_UNKNOWN and "Im c >= 0" in text
    doc = json.loads(out.read_text())
    assert doc["symmetry_halving"] is True
    assert {e["source"] for e in doc["boxes"]} == {"computed", "conjugate mirror"}

    bad = tmp_path / "bad.txt"
    bad.write_text("1 0 -10\n")
    code, _, err = run(capsys, "sweep", str(bad), "--out", str(tmp_path / "x.json"))
    assert code == EXIT_ERROR and "four intervals" in err


def test_cr_enclose_round_trip(capsys, tmp_path):
    out = tmp_path / "cr.cubes"
    code, _, _ = run(capsys, "cr-enclose", "--c=-10", "--rounds", "3", "--out", str(out))
    assert code == EXIT_OK
    assert load_cubes(out) == enclose_chain_recurrent(Param.make(1, -10), REAL, 3)
    code, _, err = run(capsys, "cr-enclose", "--c=-10", "--rounds", "6", "--max-cubes", "10",
                       "--out", str(out))
    assert code == EXIT_EXHAUSTED and "exhausted" in err


def test_count_and_pruning(capsys, tmp_path):
    out = tmp_path / "certs.json"
    code, text, _ = run(capsys, "count", "--c=-10", "--n", "3", "--out", str(out))
    assert code == EXIT_OK and text.strip() == "n=3: 8"
    (rep,) = load_certificates(out)
    assert rep.lower_real == rep.upper_real == 8 and len(rep.certificates) == 8
    code, text, _ = run(capsys, "pruning-check", "--c=-10", "--n", "3..4")
    assert code == EXIT_OK and text.strip().endswith("pass")
    code, text, _ = run(capsys, "pruning-check", "--c=-10", "--n", "3", "0010", "0110")
    assert code == EXIT_ERROR and text.strip().endswith("fail")


def test_monodromy_constant_loop(capsys, tmp_path):
    loop = tmp_path / "const.loop"
    ParamLoop.constant(1, -10).save(loop)
    track = tmp_path / "track"
    code, text, _ = run(capsys, "monodromy", str(loop), "--n-steps", "2", "--depth", "6",
                        "--track-dir", str(track))
    assert code == EXIT_OK and "identity" in text
    assert json.loads((track / "track.json").read_text())["format"] == "horseshoe track v1"
    svg = tmp_path / "slice.svg"
    code, text, _ = run(capsys, "render", str(track), "--out", str(svg))
    assert code == EXIT_OK and "track" in text and svg.read_text().startswith("<?xml")


def test_render_deterministic_and_empty(capsys, tmp_path):
    region = tmp_path / "r.txt"
    region.write_text("1 0 -10.5:-9.5 0\n")
    sweep = tmp_path / "s.json"
    assert run(capsys, "sweep", str(region), "--mode", REAL, "--out", str(sweep))[0] == EXIT_OK
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "render", str(sweep), "--out", str(a))[0] == EXIT_OK
    assert run(capsys, "render", str(sweep), "--out", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    empty = tmp_path / "empty.cubes"
    empty.write_text("")
    code, text, _ = run(capsys, "render", str(empty), "--out", str(tmp_path / "e.svg"))
    assert code == EXIT_OK and "empty" in text
