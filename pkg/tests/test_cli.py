import json
from pathlib import Path

import pytest

from legreuel.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_euler_diff_on_xyz(capsys):
    code, out, _ = run(capsys, "euler-diff", FIX / "xyz.lgs")
    assert (code, out.strip()) == (0, "3")


def test_chi_with_reduced_slice(capsys):
    code, out, _ = run(capsys, "chi", FIX / "two_planes.lgs",
                       "--reduced-slice", FIX / "two_planes_slice.lgs")
    assert (code, out.strip()) == (0, "6")


def test_flags_before_or_after_subcommand(capsys):
    a = run(capsys, "--json", "--seed", "4", "vdim", FIX / "icis.lgs", "--ideal", "X")
    b = run(capsys, "vdim", FIX / "icis.lgs", "--json", "--seed", "4", "--ideal", "X")
    assert a[0] == 2 and a[1] == b[1]  # icis.lgs declares no ideal X


def test_vdim_of_unit_ideal(capsys, tmp_path):
    p = tmp_path / "unit.lgs"
    p.write_text("ring (x,y) local;\nideal I = 1 + x;\n")
    code, out, _ = run(capsys, "vdim", p)
    assert (code, out.strip()) == (0, "0")


def test_expression_flags(capsys):
    code, out, _ = run(capsys, "euler-diff", FIX / "xyz.lgs", "--f", "x^2+y^2+z^2",
                       "--g", "x")
    assert code == 0 and out.strip() == str(euler_value_sphere())


def euler_value_sphere():
    # mu(f) + mu(f restricted to x = 0) = 1 + 1, sign (+1) in three variables
    return 2


def test_parse_error_exit_code_and_span(capsys, tmp_path):
    p = tmp_path / "bad.lgs"
    p.write_text("ring (x) local;\npoly f = 2x;\n")
    code, out, _ = run(capsys, "--json", "vdim", p)
    rec = json.loads(out)
    assert code == 2 and rec["error"]["kind"] == "parse_error" and rec["error"]["span"] == [2, 10]


def test_hypothesis_violation_exit_code(capsys, tmp_path):
    p = tmp_path / "line.lgs"
    p.write_text("ring (x,y) local;\nideal I = x;\n")
    code, out, err = run(capsys, "--json", "icis", p, "--f", "x^2")
    assert code == 3 and json.loads(out)["error"]["kind"] == "infinite_dimension"
    code, _, err = run(capsys, "icis", p, "--f", "x^2")
    assert code == 3 and "infinite_dimension" in err


def test_missing_file(capsys, tmp_path):
    code, out, _ = run(capsys, "--json", "std", tmp_path / "nope.lgs")
    assert code == 2 and json.loads(out)["error"]["kind"] == "io_error"


def test_json_is_reproducible(capsys):
    argv = ["--json", "curve-mu", FIX / "curve.lgs", "--seed", "11"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    rec = json.loads(first)
    assert rec["result"] == {"mu_f": 2, "mu_X": 1, "deg_f": 2} and rec["seed"] == 11


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LEGREUEL_SEED", "42")
    rec = json.loads(run(capsys, "--json", "chi", FIX / "two_planes.lgs",
                         "--reduced-slice", FIX / "two_planes_slice.lgs")[1])
    assert rec["seed"] == 42
    rec = json.loads(run(capsys, "--json", "--seed", "1", "chi", FIX / "two_planes.lgs",
                         "--reduced-slice", FIX / "two_planes_slice.lgs")[1])
    assert rec["seed"] == 1 and rec["result"] == 6


def test_run_prints_every_command(capsys):
    code, out, _ = run(capsys, "run", FIX / "xyz.lgs")
    assert code == 0
    assert out.splitlines()[0] == "euler_diff: 3"
    assert "saturate: ideal(x-z, y-z)" in out


@pytest.mark.parametrize("sub, args, want", [
    ("std", ["--ideal", "i1"], "ideal(x, y)"),
    ("dim", ["--ideal", "X"], "2"),
    ("mult", ["--ideal", "X"], "2"),
    ("intersect", [], "ideal(x*t, x*z, y*t, y*z)"),
    ("saturate", ["--ideal", "X", "--f", "x"], "ideal(t, z)\nk = 1"),
])
def test_engine_subcommands(capsys, sub, args, want):
    code, out, _ = run(capsys, sub, FIX / "two_planes.lgs", *args)
    assert code == 0 and out.strip() == want


def test_pfaffian_and_ids(capsys, tmp_path):
    p = tmp_path / "skew.lgs"
    p.write_text("ring (a,b,c) global;\nmatrix M[3][3] = skew(a, b, c);\n")
    assert run(capsys, "pfaffian", p)[1].strip() == "ideal(a, b, c)"
    code, out, _ = run(capsys, "ids", FIX / "a1_surface.lgs", "--s", "2", "--fbar", "x+y-z")
    assert code == 0 and out.split() == ["nu_X", "=", "1", "mu_f", "=", "2",
                                         "nu_slice", "=", "1"]


def test_gorenstein_subcommand(capsys, tmp_path):
    p = tmp_path / "a1.lgs"
    p.write_text("ring (x,y,z,t) local;\nideal X = x^2+y^2+z^2-t;\n")
    assert run(capsys, "gorenstein-mu", p)[1].strip() == "1"
