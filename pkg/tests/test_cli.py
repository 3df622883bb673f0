"""Tests for the command line surface and its exit codes."""

import json
from unittest.mock import patch

import numpy as np
import pytest


@pytest.fixture
def circle_file(tmp_path):
    from weakplateau.cli import main
    path = tmp_path / "circle.json"
    assert main(["generate", "circle", "--radius", "1", "-n", "64", "-o", str(path)]) == 0
    return path


class TestParsing:
    def test_parse_params(self):
        from weakplateau.cli import parse_params
        params = parse_params(["--hook-depth", "0.6", "--n-turns=2", "--direction", "0,0,-1"])
        assert params == {"hook_depth": 0.6, "n_turns": 2, "direction": [0.0, 0.0, -1.0]}

    def test_parse_params_needs_values(self):
        from weakplateau.cli import parse_params
        with pytest.raises(ValueError, match="needs a value"):
            parse_params(["--radius"])
        with pytest.raises(ValueError, match="not a number"):
            parse_params(["--radius", "big"])
        with pytest.raises(ValueError, match="unexpected"):
            parse_params(["radius"])

    def test_global_flags_build_config(self):
        from weakplateau.cli import build_parser, config_from_args
        args = build_parser().parse_args(["--refine", "1", "classify", "c.json", "--route-mode", "shortest", "--seed", "3"])
        config = config_from_args(args)
        assert config.refine_levels == 1
        assert config.route_mode == "shortest_path"
        assert config.seed == 3

    def test_route_modes_come_from_config(self):
        from weakplateau.cli import ROUTE_CHOICES, build_parser, config_from_args
        from weakplateau.core.config import ROUTE_MODES
        assert set(ROUTE_MODES) <= set(ROUTE_CHOICES)
        for mode in ROUTE_MODES:
            args = build_parser().parse_args(["classify", "c.json", "--route-mode", mode])
            assert config_from_args(args).route_mode == mode

    def test_env_overrides(self, monkeypatch):
        from weakplateau.cli import build_parser, config_from_args
        monkeypatch.setenv("PLATEAU_MAX_ITERS", "77")
        monkeypatch.setenv("PLATEAU_TOL_SCALE", "2.5")
        config = config_from_args(build_parser().parse_args(["classify", "c.json"]))
        assert config.max_iterations == 77
        assert config.tol_scale == 2.5
        config = config_from_args(build_parser().parse_args(["classify", "c.json", "--max-iters", "5"]))
        assert config.max_iterations == 5

    def test_stray_arguments_rejected(self, circle_file):
        from weakplateau.cli import main
        with pytest.raises(SystemExit) as info:
            main(["classify", str(circle_file), "--bogus", "1"])
        assert info.value.code == 2


class TestGenerate:
    def test_list(self, capsys):
        from weakplateau.cli import main
        assert main(["generate", "--list"]) == 0
        out = capsys.readouterr().out
        assert "circle(radius=1.0, n=64)" in out
        assert "add_thin_tail(" in out

    def test_writes_the_family(self, circle_file):
        from weakplateau.gallery import circle
        from weakplateau.reports.formats import read_curve
        assert np.array_equal(read_curve(circle_file).vertices, circle(1.0, 64).vertices)

    def test_unknown_parameter_is_invalid_input(self, tmp_path):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        assert main(["generate", "circle", "--lobes", "3", "-o", str(tmp_path / "c.json")]) == EXIT_INVALID_INPUT

    def test_missing_family(self):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        assert main(["generate"]) == EXIT_INVALID_INPUT

    def test_splice_on_a_base(self, tmp_path, circle_file):
        from weakplateau.cli import main
        from weakplateau.reports.formats import read_curve
        out = tmp_path / "tail.json"
        code = main(["generate", "add_thin_tail", "--base", str(circle_file), "--direction", "0,0,-1",
                     "--length", "0.5", "--width", "0.01", "-o", str(out)])
        assert code == 0
        assert read_curve(out).vertices[:, 2].min() == pytest.approx(-0.5)


class TestClassify:
    def test_circle_report(self, tmp_path, circle_file):
        from weakplateau.cli import main
        out = tmp_path / "report.json"
        assert main(["classify", str(circle_file), "--refine", "1", "-o", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["command"] == "classify"
        assert report["verdicts"] == {"is_weak_extreme": True, "is_extreme": True}
        assert report["classification"]["n_hooks"] == 0

    def test_stdout_by_default(self, circle_file, capsys):
        from weakplateau.cli import main
        assert main(["classify", str(circle_file), "--refine", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["command"] == "classify"

    def test_missing_file(self, tmp_path):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        assert main(["classify", str(tmp_path / "nope.json")]) == EXIT_INVALID_INPUT

    def test_schema_error(self, tmp_path):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        path = tmp_path / "bad.json"
        path.write_text('{"format": "plateau-curve/1", "closed": true, "vertices": [[0, 0]]}')
        assert main(["classify", str(path)]) == EXIT_INVALID_INPUT

    def test_self_crossing_curve(self, tmp_path):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        path = tmp_path / "bowtie.json"
        path.write_text('{"format": "plateau-curve/1", "closed": true, '
                        '"vertices": [[0, 0, 0], [1, 1, 0], [1, 0, 0], [0, 1, 0]]}')
        assert main(["classify", str(path)]) == EXIT_INVALID_INPUT


class TestSolve:
    def test_flat_disk(self, tmp_path, circle_file, capsys):
        from weakplateau.cli import main
        from weakplateau.reports.formats import read_mesh
        out = tmp_path / "disk.obj"
        assert main(["solve", str(circle_file), "--refine", "2", "-o", str(out)]) == 0
        mesh, header = read_mesh(out)
        assert mesh.area == pytest.approx(np.pi, rel=0.01)
        assert header["verdicts"]["embedded"]
        assert len(header["config_hash"]) == 16
        report = json.loads((tmp_path / "disk_report.json").read_text())
        assert report["artifacts"] == {"disk": "disk.obj"}
        assert report["solve"]["area"] == pytest.approx(mesh.area)
        assert capsys.readouterr().out.startswith("area ")

    def test_non_convergence_keeps_the_mesh(self, tmp_path, circle_file):
        """Exit code 3, and the last iterate is still written."""
        from weakplateau.cli import EXIT_NONCONVERGENCE, main
        from weakplateau.core.geometry import JordanCurve
        from weakplateau.core.meshing import initial_disk
        from weakplateau.core.solver import SolveStats
        from weakplateau.errors import NonConvergence
        from weakplateau.reports.formats import read_curve
        mesh = initial_disk(JordanCurve(read_curve(circle_file).vertices), 1)
        stuck = NonConvergence("stuck", mesh=mesh, stats=SolveStats(iterations=1, area_trace=[mesh.area], residual=1.0))
        out = tmp_path / "disk.obj"
        with patch("weakplateau.core.solver.minimize_area", side_effect=stuck):
            code = main(["solve", str(circle_file), "-o", str(out)])
        assert code == EXIT_NONCONVERGENCE
        assert out.exists()
        report = json.loads((tmp_path / "disk_report.json").read_text())
        assert report["exit_code"] == EXIT_NONCONVERGENCE
        assert report["verdicts"]["converged"] is False


class TestCheck:
    def _write(self, path, mesh, header=None):
        from weakplateau.reports.formats import write_mesh
        return write_mesh(path, mesh, header)

    def test_embedded_mesh(self, tmp_path, cube_mesh):
        from weakplateau.cli import main
        path = self._write(tmp_path / "cube.obj", cube_mesh)
        out = tmp_path / "check.json"
        assert main(["check", str(path), "-o", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["verdicts"] == {"embedded": True}
        assert report["check"]["closed"]

    def test_self_intersecting_mesh(self, tmp_path, crossing_mesh):
        from weakplateau.cli import EXIT_VERIFICATION, main
        path = self._write(tmp_path / "x.obj", crossing_mesh)
        assert main(["check", str(path), "-o", str(tmp_path / "check.json")]) == EXIT_VERIFICATION

    def test_recorded_verdict_mismatch(self, tmp_path, cube_mesh):
        """A header claiming a clean mesh is not embedded fails the check."""
        from weakplateau.cli import EXIT_VERIFICATION, main
        path = self._write(tmp_path / "cube.obj", cube_mesh, {"verdicts": {"embedded": False}})
        out = tmp_path / "check.json"
        assert main(["check", str(path), "-o", str(out)]) == EXIT_VERIFICATION
        assert json.loads(out.read_text())["verdicts"]["matches_recorded"] is False

    def test_disk_boundary_counted(self, tmp_path, unit_circle):
        from weakplateau.cli import main
        from weakplateau.core.meshing import initial_disk
        path = self._write(tmp_path / "disk.obj", initial_disk(unit_circle, 1))
        out = tmp_path / "check.json"
        assert main(["check", str(path), "-o", str(out)]) == 0
        assert json.loads(out.read_text())["check"]["boundary_vertices"] == 128

    def test_malformed_obj(self, tmp_path):
        from weakplateau.cli import EXIT_INVALID_INPUT, main
        path = tmp_path / "bad.obj"
        path.write_text("v 0 0 0\nf 1 2 3\n")
        assert main(["check", str(path)]) == EXIT_INVALID_INPUT


class TestRuns:
    def test_pipeline_run_directory(self, tmp_path, circle_file):
        from weakplateau.cli import main
        run = tmp_path / "runs" / "circle"
        assert main(["pipeline", str(circle_file), "--refine", "2", "-o", str(run)]) == 0
        for name in ("report.json", "meta.json", "sigma.obj", "core.obj"):
            assert (run / name).exists()
        report = json.loads((run / "report.json").read_text())
        assert report["pipeline"]["mode"] == "ExtremeFastPath"
        assert report["exit_code"] == 0
        session = json.loads((run.parent / "session_log.json").read_text())
        assert session[-1]["run"] == "circle"

    def test_default_run_dir(self, outputs, circle_file, capsys):
        from pathlib import Path
        from weakplateau.cli import main
        assert main(["pipeline", str(circle_file), "--refine", "1"]) == 0
        run = Path(capsys.readouterr().out.strip().splitlines()[-1])
        assert run.parent == outputs
        assert (run / "report.json").exists()

    def test_reports_reproducible(self, tmp_path, circle_file):
        """Two runs on the same input agree once timings are dropped."""
        from weakplateau.cli import main
        from weakplateau.reports.report import RunReport
        a, b = tmp_path / "a", tmp_path / "b"
        for run in (a, b):
            assert main(["pipeline", str(circle_file), "--refine", "1", "-o", str(run)]) == 0
        first = RunReport.read(a / "report.json").comparable()
        second = RunReport.read(b / "report.json").comparable()
        assert first == second

    @pytest.mark.slow
    def test_compare_run(self, tmp_path, circle_file):
        from weakplateau.cli import main
        run = tmp_path / "cmp"
        assert main(["compare", str(circle_file), "--refine", "1", "-o", str(run)]) == 0
        report = json.loads((run / "report.json").read_text())
        assert report["verdicts"]["pipeline_ok"]
        assert report["verdicts"]["genus_zero_witness"]
        assert (run / "free_fan.obj").exists()
