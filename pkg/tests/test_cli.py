import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from nambu_lab.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes_on_both_algebras(capsys):
    code, out, _ = run(capsys, "verify", "--samples", 30)
    assert code == 0
    rep = json.loads(out)
    assert {c["check"] for c in rep["checks"]} >= {"skew", "nambu"}
    assert all(c["violations"] == 0 for c in rep["checks"])
    code, out, _ = run(capsys, "verify", "--algebra", DATA / "a4.json", "--samples", 10)
    assert code == 0


def test_output_is_deterministic(capsys):
    first = run(capsys, "verify", "--samples", 25, "--seed", 4)[1]
    assert run(capsys, "verify", "--samples", 25, "--seed", 4)[1] == first


def test_bracket_in_csv_and_text(capsys):
    code, out, _ = run(capsys, "bracket", "L:1:1", "L:0:2", "h:-1:0", "--format", "csv")
    assert code == 0
    rows = dict(csv.reader(io.StringIO(out)))
    assert rows["value[0].generator.family"] == "h" and rows["value[0].coefficient"] == "3"
    code, out, _ = run(capsys, "bracket", "L:0:0", "L:0:1", "Lbar:5:2", "--format", "text")
    assert code == 0 and "coefficient: -5" in out


def test_bad_inputs_exit_with_usage_error(capsys, tmp_path, monkeypatch):
    assert run(capsys, "bracket", "Q:0:0", "L:0:0", "L:1:0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "verify", "--algebra", bad)
    assert code == 2 and "error" in err
    assert run(capsys, "extend", "--cocycle", bad)[0] == 2
    assert run(capsys, "cohomology", "--window", "1,2,3,4")[0] == 2
    monkeypatch.setenv("NAMBU_LAB_THREADS", "0")
    assert run(capsys, "verify")[0] == 2


def test_extend_with_equivalence(capsys):
    code, out, _ = run(
        capsys, "extend", "--cocycle", DATA / "w_cocycle_F.json", "--equiv", DATA / "w_cocycle_G.json", "--h", DATA / "w_h.json", "--samples", 40
    )
    rep = json.loads(out)
    assert code == 0 and rep["round_trip_mismatches"] == 0 and rep["equivalence"]["violations"] == 0


def test_extend_detects_a_wrong_equivalence(capsys):
    code, out, _ = run(capsys, "extend", "--cocycle", DATA / "w_cocycle_F.json", "--equiv", DATA / "w_cocycle_F.json", "--h", DATA / "w_h.json", "--samples", 100)
    assert code == 1 and json.loads(out)["equivalence"]["violations"] > 0


def test_deform_readings(capsys):
    series = DATA / "w_series_coboundary.json"
    code, out, _ = run(capsys, "deform", "--series", series, "--samples", 40, "--leibniz", "deformed")
    assert code == 0
    code, out, _ = run(capsys, "deform", "--series", series, "--samples", 40)
    rep = json.loads(out)
    assert code == 1 and rep["orders"][0]["violations"] == 0 and rep["orders"][1]["violations"] > 0
    code, out, _ = run(capsys, "deform", "--series", series, "--samples", 20, "--order", 3, "--leibniz", "deformed")
    assert code == 0 and len(json.loads(out)["orders"]) == 4


def test_cohomology_on_a_table_algebra(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", DATA / "a4.json", "--k", 1, "--coeffs", "adjoint")
    rep = json.loads(out)
    assert code == 0 and rep["cocycle_dim"] == 6 and rep["exact"]


def test_trivial_h2_on_a_small_window(capsys):
    code, out, _ = run(capsys, "cohomology", "--k", 2, "--coeffs", "trivial", "--bidegree", "1,0", "--window", "5,3,2")
    rep = json.loads(out)
    assert code == 0 and rep["interior_h_dim"] == 0


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nambu_lab.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "nambu-lab" in proc.stdout
    with pytest.raises(SystemExit):
        main(["no-such-command"])
