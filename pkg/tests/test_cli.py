import csv
import json
import math

import pytest

from epsortho.cli import main

from .conftest import TAN10


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_surfaces(capsys):
    code, out, _ = run(capsys, "surfaces")
    assert code == 0
    listing = json.loads(out)
    assert "cos2_plus_cos2" in listing["surfaces"] and "sine" in listing["curves"]


@pytest.mark.parametrize("curve,expected", [("sine", "infinite"), ("exp_sqrt_abs", "zero")])
def test_bound_d_kinds(capsys, curve, expected):
    code, out, _ = run(capsys, "bound-d", "--surface", curve)
    assert code == 0 and out.strip() == expected


def test_bound_d_square(capsys, tmp_path):
    code, out, _ = run(capsys, "bound-d", "--surface", "square", "--tolerance", 0.01, "--out", tmp_path)
    assert code == 0
    value = float(out.split()[1])
    assert value == pytest.approx(2.6, abs=0.1)
    assert json.loads((tmp_path / "bound_d.json").read_text())["kind"] == "finite"


def test_imaging_sine_families(capsys, tmp_path):
    code, out, _ = run(capsys, "imaging", "--surface", "sine", "--d-values", "1,2,5,50", "--out", tmp_path)
    assert code == 0
    info = json.loads((tmp_path / "imaging.json").read_text())
    assert [f["d"] for f in info["families"]] == [1, 2, 5, 50]
    assert all(f["valid"] for f in info["families"])
    svg = (tmp_path / "imaging.svg").read_text()
    assert svg.count("d = ") == 4 and "invalid" not in svg


def test_imaging_square_marks_violations(capsys, tmp_path):
    code, _, _ = run(capsys, "imaging", "--surface", "square", "--d-values", "5", "--out", tmp_path)
    assert code == 0
    svg = (tmp_path / "imaging.svg").read_text()
    assert 'stroke="#d62728"/>' in svg and "(invalid)" in svg


def test_imaging_plane_offset(capsys, tmp_path):
    code, _, _ = run(capsys, "imaging", "--surface", "plane", "--distance", 2, "--samples", 5,
                     "--out", tmp_path, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "imaging.csv").open()))
    assert len(rows) == 25
    assert all(float(r["z'"]) == 2.0 and r["x"] == r["x'"] for r in rows)
    assert not (tmp_path / "imaging.json").exists()


def test_region_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "region", "--surface", "cos2_plus_cos2", "--center", "0,0", "--center", "0,-1",
                       "--center", "-1,-1", "--distance", 2, "--out", tmp_path, "--seed-test")
    assert code == 0
    assert out.count("members=") == 3
    for k in range(3):
        assert (tmp_path / f"region_{k}_members.csv").exists()
        assert (tmp_path / f"region_{k}_boundary.csv").exists()
    svg = (tmp_path / "region.svg").read_text()
    assert svg.count('fill="#ff0000"') == 3


def test_plane_region_disc(capsys, tmp_path):
    code, _, _ = run(capsys, "region", "--surface", "plane", "--center", "0,0", "--out", tmp_path)
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "region_0_members.csv").open()))
    assert max(math.hypot(float(r["x"]), float(r["y"])) for r in rows) <= 2 * TAN10


def test_dem_region_seed_test(capsys, tmp_path, pgm_file):
    code, out, _ = run(capsys, "region", "--dem", pgm_file, "--spacing", "0.05,0.05", "--scale", 1.5,
                       "--center", "2.4,2.4", "--dx", 0.02, "--seed-test", "--out", tmp_path)
    assert code == 0, out
    code, _, _ = run(capsys, "dem", "--dem", pgm_file, "--out", tmp_path)
    assert code == 0 and (tmp_path / "heightfield.csv").exists()


def test_approx_octagon_svg(capsys, tmp_path):
    code, _, _ = run(capsys, "approx", "--surface", "cos2_plus_cos2", "--center", "0,-1", "--n-directions", 8,
                     "--methods", "polygonal", "--out", tmp_path)
    assert code == 0
    data = json.loads((tmp_path / "approx.json").read_text())
    assert len(data[0]["polygon"]) == 8
    assert (tmp_path / "approx_0.svg").read_text().count('r="2.5"') == 8


def test_circular_two_on_plane(capsys, tmp_path):
    code, _, _ = run(capsys, "approx", "--surface", "plane", "--center", "0.5,0.5", "--methods", "circular_two",
                     "--m-ratio", 2, "--out", tmp_path, "--format", "json")
    assert code == 0
    data = json.loads((tmp_path / "approx.json").read_text())
    assert data[0]["radius"] == pytest.approx(2 * TAN10, rel=1e-15)


def _strip_times(text):
    records = json.loads(text)
    for r in records:
        r.pop("build_time")
    return records


def test_compare_deterministic(capsys, tmp_path):
    argv = ["compare", "--surface", "cos2_plus_cos2", "--center", "-1,-1", "--center", "-0.5,0",
            "--center", "0,-0.5"]
    assert run(capsys, *argv, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, *argv, "--out", tmp_path / "b")[0] == 0
    a = (tmp_path / "a" / "compare.json").read_text()
    b = (tmp_path / "b" / "compare.json").read_text()
    assert _strip_times(a) == _strip_times(b)
    ca = [r[:-1] for r in csv.reader((tmp_path / "a" / "compare.csv").open())]
    cb = [r[:-1] for r in csv.reader((tmp_path / "b" / "compare.csv").open())]
    assert ca == cb and len(ca) == 1 + 3 * 4
    for name in ("compare_0.svg", "compare_1.svg", "compare_2.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["region", "--surface", "plane"],  # no center
        ["region", "--surface", "plane", "--center", "0,0", "--epsilon-deg", 95],
        ["region", "--surface", "plane", "--center", "0,0", "--distance", -1],
        ["region", "--surface", "plane", "--center", "0,0", "--dx", 0],
        ["region", "--surface", "torus", "--center", "0,0"],
        ["region", "--surface", "sine", "--center", "0,0"],
        ["bound-d", "--surface", "plane"],
        ["region", "--surface", "plane", "--center", "0"],
        ["compare", "--surface", "plane", "--center", "0,0", "--n-directions", 7],
        ["region", "--dem", "/nonexistent.pgm", "--center", "0,0"],
        ["region", "--surface", "plane", "--center", "0,0", "--param", "oops"],
    ],
)
def test_config_errors_write_nothing(capsys, tmp_path, argv):
    code, _, err = run(capsys, *argv, "--out", tmp_path / "out")
    assert code == 2, err
    assert not (tmp_path / "out").exists()


def test_computation_error_writes_nothing(capsys, tmp_path):
    code, _, err = run(capsys, "region", "--surface", "plane", "--center", "0,0", "--center", "-9,0",
                       "--out", tmp_path / "out")
    assert code == 3 and "outside" in err
    assert not (tmp_path / "out").exists()


def test_degenerate_approx_is_computation_error(capsys, tmp_path):
    code, _, _ = run(capsys, "approx", "--surface", "cos2_plus_cos2", "--center", "0,0", "--epsilon-deg", 0.01,
                     "--distance", 0.001, "--methods", "polygonal", "--out", tmp_path / "out")
    assert code == 3
    assert not (tmp_path / "out").exists()


def test_unknown_subcommand_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
