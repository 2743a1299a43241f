import json
import math

import numpy as np
import pytest

from selfaffine.carpets import dumps_carpet
from selfaffine.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main
from selfaffine.export import read_ppm
from selfaffine.ifs import IFS, dumps_ifs, loads_ifs

from conftest import CARPET_BOX, LOG3_LOG2


@pytest.fixture
def sier_file(tmp_path, sierpinski):
    path = tmp_path / "sierpinski.json"
    path.write_text(dumps_ifs(sierpinski))
    return str(path)


@pytest.fixture
def carpet_file(tmp_path, worked_carpet):
    path = tmp_path / "carpet.json"
    path.write_text(dumps_carpet(worked_carpet))
    return str(path)


def write_ifs(tmp_path, ifs, name="ifs.json"):
    path = tmp_path / name
    path.write_text(dumps_ifs(ifs))
    return str(path)


class TestDims:
    def test_sierpinski_json(self, sier_file, capsys):
        assert main(["dims", "--ifs", sier_file, "--depth", "4", "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["similarity_dimension"] == pytest.approx(LOG3_LOG2, abs=1e-10)
        assert report["affinity_dimension"]["4"] == pytest.approx(LOG3_LOG2, abs=1e-9)
        assert report["box_estimate"]["slope"] == pytest.approx(LOG3_LOG2, abs=0.05)
        assert report["config"]["seed"] == 0 and report["config"]["points"] == 100_000
        assert list(report["affinity_dimension"]) == ["1", "2", "4"]

    def test_carpet_text(self, carpet_file, capsys):
        assert main(["dims", "--carpet", carpet_file, "--depth", "3", "--points", "20000"]) == EXIT_OK
        out = capsys.readouterr().out
        assert f"box dimension (closed form):       {CARPET_BOX:.7f}" in out
        assert "hausdorff dimension (closed form): 1.3496" in out
        assert "inequality chain:" in out and "VIOLATED" not in out
        assert "config: {" in out

    def test_csv_outputs(self, sier_file, tmp_path, capsys):
        pressure, boxes = tmp_path / "p.csv", tmp_path / "b.csv"
        args = ["dims", "--ifs", sier_file, "--depths", "2", "--points", "5000"]
        args += ["--pressure-out", str(pressure), "--boxcount-out", str(boxes), "--scales", "2..5"]
        assert main(args) == EXIT_OK
        assert pressure.read_text().startswith("# n=2 ")
        assert len(boxes.read_text().splitlines()) == 1 + 4 + 1

    def test_saturation_warning(self, sier_file, capsys):
        assert main(["dims", "--ifs", sier_file, "--depths", "1", "--points", "500"]) == EXIT_OK
        captured = capsys.readouterr()
        assert "saturated" in captured.err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"d": 2, "maps": [ {"A": [[1,0],[0,1]] "a": [0,0]} ]}')
        assert main(["dims", "--ifs", str(path)]) != EXIT_OK
        err = capsys.readouterr().err
        assert "byte 39" in err and "line 1" in err

    def test_non_contractive(self, tmp_path, capsys):
        path = write_ifs(tmp_path, IFS.from_arrays([np.eye(2)], [(0, 0)]))
        assert main(["dims", "--ifs", path]) == EXIT_USAGE
        assert "map 0" in capsys.readouterr().err

    def test_budget(self, sier_file, capsys):
        assert main(["dims", "--ifs", sier_file, "--depths", "20"]) == EXIT_BUDGET
        assert "budget" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "extra",
        [[], ["--scales", "5..3"], ["--seed", "-1"], ["--depth", "0"], ["--bogus"]],
    )
    def test_usage_errors(self, sier_file, extra, capsys):
        argv = ["dims"] + (extra if not extra else ["--ifs", sier_file] + extra)
        assert main(argv) == EXIT_USAGE

    def test_ifs_and_carpet_exclusive(self, sier_file, carpet_file):
        assert main(["dims", "--ifs", sier_file, "--carpet", carpet_file]) == EXIT_USAGE


class TestRender:
    def test_byte_identical(self, sier_file, tmp_path):
        a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
        for path in (a, b):
            argv = ["render", "--ifs", sier_file, "--seed", "7", "--points", "20000", "--out", str(path)]
            assert main(argv + ["--width", "128", "--height", "96"]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert read_ppm(a.read_bytes()).shape == (96, 128, 3)

    def test_seed_changes_image(self, sier_file, tmp_path):
        paths = []
        for seed in ("1", "2"):
            path = tmp_path / f"{seed}.ppm"
            main(["render", "--ifs", sier_file, "--seed", seed, "--points", "2000", "--out", str(path)])
            paths.append(path.read_bytes())
        assert paths[0] != paths[1]

    def test_overlay(self, sier_file, tmp_path):
        path = tmp_path / "cover.ppm"
        argv = ["render", "--ifs", sier_file, "--points", "5000", "--cover-delta", "0.1", "--out", str(path)]
        assert main(argv) == EXIT_OK
        img = read_ppm(path.read_bytes())
        assert np.any(np.all(img == (255, 64, 64), axis=2))

    def test_needs_out(self, sier_file):
        assert main(["render", "--ifs", sier_file]) == EXIT_USAGE

    def test_size_limit(self, sier_file, tmp_path):
        assert main(["render", "--ifs", sier_file, "--width", "9000", "--out", str(tmp_path / "x")]) == EXIT_USAGE


class TestOtherCommands:
    def test_cover(self, sier_file, capsys):
        assert main(["cover", "--ifs", sier_file, "--delta", "0.3", "--ball-radius", "0.1"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert sum(line.startswith("ellipse,") for line in lines) == 9
        assert any(line.startswith("ball,") for line in lines)

    def test_cover_bad_delta(self, sier_file):
        assert main(["cover", "--ifs", sier_file, "--delta", "1.5"]) == EXIT_USAGE

    @pytest.mark.parametrize(
        "extra, rows",
        [(["--mode", "chaos", "--points", "10"], 10), (["--mode", "depth", "--depth", "3"], 27)],
    )
    def test_points(self, sier_file, capsys, extra, rows):
        assert main(["points", "--ifs", sier_file] + extra) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "x,y" and len(lines) == rows + 1

    def test_points_random_sigma_zero(self, sier_file, capsys):
        main(["points", "--ifs", sier_file, "--mode", "depth", "--depth", "4"])
        plain = capsys.readouterr().out
        main(["points", "--ifs", sier_file, "--mode", "random", "--depth", "4", "--sigma", "0", "--seed", "5"])
        assert capsys.readouterr().out == plain

    def test_carpet(self, carpet_file, tmp_path, capsys):
        out = tmp_path / "ifs.json"
        assert main(["carpet", "--carpet", carpet_file, "--depth", "2", "--out", str(out)]) == EXIT_OK
        text = capsys.readouterr().out
        assert "hausdorff dimension: 1.3496838" in text
        assert f"box dimension:       {CARPET_BOX:.7f}" in text
        assert loads_ifs(out.read_text()).k == 3

    def test_carpet_gap(self, tmp_path, gap_carpet, capsys):
        path = tmp_path / "gap.json"
        path.write_text(dumps_carpet(gap_carpet))
        assert main(["carpet", "--carpet", str(path)]) == EXIT_OK
        text = capsys.readouterr().out
        gap = float(text.split("gap: s - dim_B = ")[1].split()[0])
        assert gap == pytest.approx(1 - math.log(2) / math.log(3), abs=1e-6)


class TestCheck:
    def test_osc_pass_on_carpet(self, carpet_file, capsys):
        assert main(["check", "--carpet", carpet_file]) == EXIT_OK
        assert "open set condition: PASS" in capsys.readouterr().out

    def test_osc_sierpinski_box(self, sier_file):
        assert main(["check", "--ifs", sier_file, "--rect", f"0,0,1,{math.sqrt(3) / 2}"]) == EXIT_OK

    def test_osc_fail_json(self, tmp_path, capsys):
        path = write_ifs(tmp_path, IFS.from_arrays([0.5 * np.eye(2)] * 2, [(0, 0)] * 2))
        assert main(["check", "--ifs", path, "--rect", "0,0,1,1", "--json"]) == EXIT_FAIL
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "fail" and doc["witness"]["subject"] == [0, 1]

    def test_osc_needs_rect_for_ifs(self, sier_file):
        assert main(["check", "--ifs", sier_file]) == EXIT_USAGE

    def test_bad_rect(self, sier_file):
        assert main(["check", "--ifs", sier_file, "--rect", "0,0,1"]) == EXIT_USAGE
        assert main(["check", "--ifs", sier_file, "--rect", "0,0,0,1"]) == EXIT_USAGE

    def test_hueter_lalley_fail(self, carpet_file):
        assert main(["check", "--carpet", carpet_file, "--condition", "hueter-lalley"]) == EXIT_FAIL

    def test_hueter_lalley_inconclusive(self, tmp_path):
        # alpha_2 == alpha_1^2 exactly and zero off-diagonal entries: no margin either way
        ifs = IFS.from_arrays([np.diag([0.25, 0.0625])], [(0, 0)])
        path = write_ifs(tmp_path, ifs)
        assert main(["check", "--ifs", path, "--condition", "hueter-lalley"]) == EXIT_INCONCLUSIVE

    def test_three_dimensional_unsupported(self, tmp_path, capsys):
        ifs = IFS.from_arrays([0.5 * np.eye(3)], [(0, 0, 1)])
        path = write_ifs(tmp_path, ifs)
        assert main(["check", "--ifs", path, "--rect", "0,0,1,1"]) == EXIT_USAGE
        assert "plane" in capsys.readouterr().err
