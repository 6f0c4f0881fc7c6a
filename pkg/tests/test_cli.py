import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from taubnut.cli import COLUMNS, EXIT_USAGE, run

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "fig1.json"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


@pytest.mark.parametrize("cmd", ["simulate", "trajectory", "orbit", "potential"])
def test_table_headers(capsys, cmd):
    code, out, _ = call(capsys, cmd, "--config", str(CONFIG), "--samples", "20")
    assert code == 0
    header, rows = read_csv(out)
    assert header == COLUMNS[cmd]
    assert len(rows) >= 10


def test_simulate_drifts_small(capsys):
    code, out, _ = call(capsys, "simulate", "--eta", "0.1", "--samples", "50")
    _, rows = read_csv(out)
    assert max(abs(r[4]) for r in rows) <= 1e-9
    assert max(abs(r[5]) for r in rows) <= 1e-8


def test_trajectory_on_shell(capsys):
    _, out, _ = call(capsys, "trajectory", "--eta", "0.1", "--samples", "64")
    _, rows = read_csv(out)
    assert max(abs(r[4]) for r in rows) <= 1e-12


def test_orbit_json(capsys):
    code, out, _ = call(capsys, "orbit", "--eta", "0.1", "--samples", "8", "--format", "json")
    doc = json.loads(out)
    assert doc["columns"] == COLUMNS["orbit"]
    assert len(doc["rows"]) == 8
    assert doc["rows"][0][1] == pytest.approx(0.1716118, abs=1e-7)


def test_potential_reversed_column(capsys):
    _, out, _ = call(capsys, "potential", "--eta", "-0.1", "--samples", "100", "--format", "json")
    rows = json.loads(out)["rows"]
    inner = [r for r in rows if r[0] < 0.1]
    assert inner and all(r[2] == pytest.approx(-r[1], rel=1e-12) for r in inner)
    assert all(r[2] is None for r in rows if r[0] > 0.1)


def test_brackets_check_reproducible(capsys):
    a = call(capsys, "brackets-check", "--eta", "0.1", "--samples", "30", "--seed", "7")
    b = call(capsys, "brackets-check", "--eta", "0.1", "--samples", "30", "--seed", "7")
    assert a == b
    doc = json.loads(a[1])
    assert doc["pass"] and doc["max_residual"] <= 1e-10


def test_third_law(capsys):
    _, out, _ = call(capsys, "third-law", "--config", str(CONFIG))
    doc = json.loads(out)
    assert doc["ratio"] == pytest.approx(4 * math.pi**2 * 1.21 / 0.729, rel=1e-14)
    assert doc["flat_ratio"] == pytest.approx(4 * math.pi**2, rel=1e-15)


def test_regime_alpha_flag(capsys):
    _, out, _ = call(capsys, "regime", "--alpha", "0.8", "--energy", "-1", "--r0", "0.3")
    doc = json.loads(out)
    assert doc["alpha"] == pytest.approx(0.8)
    assert doc["case"] == "alpha_lt_1" and doc["bounded"] is True


def test_output_file(tmp_path, capsys):
    target = tmp_path / "orbit.csv"
    assert run(["orbit", "--samples", "5", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert read_csv(target.read_text())[0] == COLUMNS["orbit"]


def test_same_seed_files_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(["brackets-check", "--samples", "10", "--seed", "3", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_unknown_config_key(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"params": {"m": 1, "mass": 2}}))
    code, _, err = call(capsys, "orbit", "--config", str(bad))
    assert code == 2 and "mass" in err
    bad.write_text(json.dumps({"energy": -1, "colour": "red"}))
    assert call(capsys, "orbit", "--config", str(bad))[0] == 2


@pytest.mark.parametrize("argv", [["nope"], ["orbit", "--wat"], ["orbit", "--eta", "x"], []])
def test_usage_errors(capsys, argv):
    assert call(capsys, *argv)[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["orbit", "--m", "-1"],
    ["orbit", "--energy", "0.5"],
    ["third-law", "--eta", "1.0"],
    ["regime", "--eta", "0.1", "--r0", "0.3"],
    ["regime", "--eta", "-0.1"],
])
def test_domain_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_boundary_hit_exit_code(capsys):
    code, out, err = call(capsys, "simulate", "--alpha", "2", "--r0", "0.3", "--p0", "-0.1", "--t-final", "5")
    assert code == 3 and "boundary" in err
    header, rows = read_csv(out)
    assert header == COLUMNS["simulate"] and rows


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "taubnut", "orbit", "--samples", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(COLUMNS["orbit"])
