import json
import subprocess
import sys

import pytest

from superapollonian.cli import main, parse_gaussian
from superapollonian.gaussian import GaussianInteger as G


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_gaussian():
    assert parse_gaussian("2+3i") == G(2, 3)
    assert parse_gaussian("i") == G(0, 1)
    assert parse_gaussian("1-i") == G(1, -1)
    assert parse_gaussian("-4") == G(-4)


def test_expand_rational(capsys):
    code, out, _ = run(capsys, "expand", "--rational", "1", "3", "--side", "B")
    data = json.loads(out)
    assert code == 0
    assert data["word_text"] == "S2 S4" and data["terminal"] == "1"
    assert "config" in data


def test_expand_zero(capsys):
    _, out, _ = run(capsys, "expand", "--rational", "0", "1")
    data = json.loads(out)
    assert data["word"] == [] and data["terminal"] == "0"


def test_expand_point(capsys):
    _, out, _ = run(capsys, "expand", "--point", "0.3828008104", "0.2638108161", "--steps", "20")
    assert json.loads(out)["word_text"].startswith("S3P S2 S2P S3P S1 S1P S4 S2 S4 S1")


def test_reduce(capsys):
    _, out, _ = run(capsys, "reduce", "lorentz", "5", "-3", "0", "-4")
    assert json.loads(out)["word_text"] == "L1P L3"
    _, out, _ = run(capsys, "reduce", "descartes-invert", "2", "3", "6", "23")
    data = json.loads(out)
    assert data["word_text"] == "S4 S3 S4P"
    assert data["swap_run_end_is_root"] is True
    _, out, _ = run(capsys, "reduce", "height", "9", "7", "4", "4")
    assert json.loads(out)["path_length"] == 2


def test_invalid_input_exits_with_2(capsys):
    code, _, err = run(capsys, "reduce", "lorentz", "3", "1", "1", "1")
    assert code == 2 and "error" in err


def test_gcd_formats(capsys):
    _, out, _ = run(capsys, "gcd", "246", "113")
    data = json.loads(out)
    assert data["reflective"]["gcd"] == 1
    assert data["reflective"]["steps"] == 15 and data["comparison"]["steps"] == 11
    _, out, _ = run(capsys, "gcd", "246", "113", "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[1].split(",")[2:4] == ["246", "113"]
    assert rows[-1] == "15,c,0,1,,,"
    assert rows[12].split(",")[4:] == ["c", "1", "0"]


def test_stats_predict_and_random(capsys, tmp_path):
    _, out, _ = run(capsys, "stats", "predict")
    assert json.loads(out)["conjectural"]["two_swaps"] == pytest.approx(0.345299, abs=1e-6)
    prefix = str(tmp_path / "rand")
    run(capsys, "stats", "random", "--count", "5", "--steps", "20", "--seed", "7", "--out", prefix, "--plot")
    first = (tmp_path / "rand.json").read_text()
    assert (tmp_path / "rand.csv").exists() and (tmp_path / "rand.png").exists()
    run(capsys, "stats", "random", "--count", "5", "--steps", "20", "--seed", "7", "--out", prefix)
    assert (tmp_path / "rand.json").read_text() == first


def test_stats_transfer(capsys):
    _, out, _ = run(capsys, "stats", "transfer", "--grid", "20000")
    data = json.loads(out)
    assert data["total_mass"] == pytest.approx(1, abs=1e-2)


def test_render_and_density(capsys, tmp_path):
    svg = tmp_path / "p.svg"
    png = tmp_path / "p.png"
    assert run(capsys, "render", "--depth", "2", "--out", str(svg), "--png", str(png))[0] == 0
    assert svg.read_text().startswith("<?xml") and png.stat().st_size > 0
    csv_path = tmp_path / "fb.csv"
    heat = tmp_path / "fb.png"
    run(capsys, "density", "--grid", "6", "5", "--out", str(csv_path), "--png", str(heat))
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "x,y,f_B" and len(lines) == 31
    assert heat.exists()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "superapollonian", "gcd", "4", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["reflective"]["gcd"] == 2
