"""Tests for the theorem pipeline, comparison runs and the worker pool."""

import numpy as np
import pytest


def _disk(points, levels=2):
    from weakplateau.core.geometry import JordanCurve
    from weakplateau.core.meshing import initial_disk
    return initial_disk(JordanCurve(points), levels)


def _ring(n=32, center=(0.0, 0.0, 0.0), plane="xy"):
    t = 2 * np.pi * np.arange(n) / n
    c, s, z = np.cos(t), np.sin(t), np.zeros(n)
    pts = np.column_stack([c, s, z] if plane == "xy" else [c, z, s])
    return pts + np.asarray(center)


class TestWorker:
    def test_results_in_task_order(self):
        from weakplateau.core.worker import run_parallel
        tasks = [lambda k=k: k * k for k in range(6)]
        assert run_parallel(tasks, jobs=3) == [0, 1, 4, 9, 16, 25]

    def test_serial(self):
        from weakplateau.core.worker import run_parallel
        assert run_parallel([lambda: "a", lambda: "b"], jobs=1) == ["a", "b"]

    def test_empty(self):
        from weakplateau.core.worker import run_parallel
        assert run_parallel([], jobs=4) == []

    def test_error_raised_after_all_tasks(self):
        """The failing task does not stop the others."""
        from weakplateau.core.worker import run_parallel
        ran = []

        def bad():
            raise ValueError("bad task")

        tasks = [bad, lambda: ran.append(1), lambda: ran.append(2)]
        with pytest.raises(ValueError, match="bad task"):
            run_parallel(tasks, jobs=2)
        assert sorted(ran) == [1, 2]

    def test_progress_reported(self):
        from weakplateau.core.worker import run_parallel
        from weakplateau.reports import state
        state.reset()
        run_parallel([lambda: None] * 4, jobs=1)
        assert state.snapshot()["progress"] == 1.0


class TestHookDiskChecks:
    def test_parallel_disks_disjoint(self):
        from weakplateau.core.pipeline import step3_verify_disjoint
        a = _disk(_ring())
        b = _disk(_ring(center=(0.0, 0.0, 0.5)))
        ok, witnesses = step3_verify_disjoint([a, b], {0: "+", 1: "-"})
        assert ok
        assert witnesses == {}

    def test_crossing_disks_reported(self):
        from weakplateau.core.pipeline import step3_verify_disjoint
        a = _disk(_ring())
        b = _disk(_ring(center=(0.1, 0.05, 0.013), plane="xz"))
        ok, witnesses = step3_verify_disjoint([a, b])
        assert not ok
        assert list(witnesses) == ["d_0|d_1"]
        assert len(witnesses["d_0|d_1"]) == 3

    def test_is_embedded(self, crossing_mesh):
        from weakplateau.core.pipeline import is_embedded
        assert not is_embedded(crossing_mesh)
        assert is_embedded(_disk(_ring()))


class TestSideSurfaces:
    """step1_side_surfaces with several core loops."""

    def _decomposition(self, loops, core_loops):
        from unittest.mock import Mock
        return Mock(
            curve=Mock(vertices=np.vstack(loops)),
            gamma_hat=loops,
            gamma_hat_plus=list(loops),
            plus=[0],
            minus=[],
            core_loops=core_loops,
            side_reference=np.zeros(3),
            reference_side="+",
        )

    def test_cores_follow_their_loops(self):
        """Cores listed out of loop order still pair with the right loop."""
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import step1_side_surfaces
        loops = [_ring(), _ring(center=(3.0, 0.0, 0.0))]
        a, b = _disk(loops[0], 1), _disk(loops[1], 1)
        t_plus, _, _, _ = step1_side_surfaces(self._decomposition(loops, [1, 0]), [b, a], None, SolverConfig())
        assert np.array_equal(t_plus[0].vertices, a.vertices)
        assert np.array_equal(t_plus[1].vertices, b.vertices)

    def test_skipped_core_loop_is_reported(self):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import step1_side_surfaces
        from weakplateau.errors import WeldFailed
        loops = [_ring(), _ring(center=(3.0, 0.0, 0.0)), _ring(center=(6.0, 0.0, 0.0))]
        cores = [_disk(loops[0], 1), _disk(loops[2], 1)]
        with pytest.raises(WeldFailed, match="loop 1 has no core"):
            step1_side_surfaces(self._decomposition(loops, [0, 2]), cores, None, SolverConfig())


class TestFastPath:
    def test_circle_pipeline(self, unit_circle, fast_config):
        """Flat disk: the extreme fast path returns the core itself."""
        from weakplateau.core.pipeline import run_pipeline
        result = run_pipeline(unit_circle, fast_config)
        assert result.mode == "ExtremeFastPath"
        assert result.failed_step is None
        assert result.ok
        assert result.sigma.area == pytest.approx(np.pi, rel=0.01)
        assert result.verdicts["embedded"]
        assert result.verdicts["stable_probe"]
        assert result.verdicts["boundary_exact"]
        assert result.verdicts["residual"] < 1e-4

    def test_summary_and_meshes(self, unit_circle, fast_config):
        from weakplateau.core.pipeline import run_pipeline
        result = run_pipeline(unit_circle, fast_config)
        assert set(result.meshes()) == {"core", "t_plus", "t_minus", "sigma_prime", "sigma"}
        summary = result.summary()
        assert summary["mode"] == "ExtremeFastPath"
        assert summary["n_hooks"] == 0
        assert summary["areas"]["sigma"] == pytest.approx(result.sigma.area)
        assert "sigma" in summary["solves"]

    def test_delta_scales_with_curve(self, unit_circle, fast_config):
        from weakplateau.core.pipeline import PipelineResult
        result = PipelineResult(curve=unit_circle, config=fast_config, analysis=None)
        assert result.delta == pytest.approx(2 * np.sqrt(2) * fast_config.barrier_offset, rel=1e-3)


class TestComparison:
    def test_gap(self):
        from weakplateau.core.pipeline import Comparison
        comp = Comparison(candidates=[{"seed": "fan", "area": 3.0}, {"seed": "flat_projection", "area": 3.2}],
                          best="fan", pipeline_area=3.5)
        assert comp.gap == pytest.approx(0.5)
        data = comp.to_dict()
        assert data["numerical_plateau"] == "fan"
        assert data["gap"] == pytest.approx(0.5)

    def test_no_pipeline_no_gap(self):
        from weakplateau.core.pipeline import Comparison
        assert Comparison(best="fan", candidates=[{"seed": "fan", "area": 1.0}]).gap is None

    def test_free_solves_on_circle(self, unit_circle, fast_config):
        from weakplateau.core.pipeline import compare_unconstrained
        comp = compare_unconstrained(unit_circle, fast_config, seeds=("fan", "flat_projection"))
        assert [c["seed"] for c in comp.candidates] == ["fan", "flat_projection"]
        assert all(c["embedded"] for c in comp.candidates)
        assert comp.best in ("fan", "flat_projection")
        assert comp.pipeline_area is None
        for c in comp.candidates:
            assert c["area"] == pytest.approx(np.pi, rel=0.01)

    def test_pipeline_seeds_skipped_without_result(self, unit_circle, fast_config):
        """Seeds needing a pipeline run are noted and skipped when none is given."""
        from weakplateau.core.pipeline import _comparison_seed
        notes = []
        assert _comparison_seed("pipeline", unit_circle, fast_config, None, notes) is None
        assert notes == ["pipeline: needs a pipeline run"]

    def test_unknown_seed(self, unit_circle, fast_config):
        from unittest.mock import Mock
        from weakplateau.core.pipeline import compare_unconstrained
        with pytest.raises(ValueError, match="unknown seed"):
            compare_unconstrained(unit_circle, fast_config, seeds=("bogus",), result=Mock(sigma=None))


class TestGenusWitness:
    def test_flat_disk_is_a_witness(self, unit_circle, fast_config):
        from weakplateau.core.pipeline import genus_witness
        report = genus_witness(unit_circle, solves={"flat": _disk(unit_circle.vertices)}, config=fast_config)
        assert report["genus_zero_witness"]
        assert report["witnesses"] == ["flat"]
        assert not report["tip_obstruction"]
        assert report["candidates"]["flat"]["inside_hull"]

    def test_crossing_mesh_is_not(self, unit_circle, crossing_mesh, fast_config):
        from weakplateau.core.pipeline import genus_witness
        report = genus_witness(unit_circle, solves={"bad": crossing_mesh}, config=fast_config)
        assert not report["genus_zero_witness"]
        assert not report["candidates"]["bad"]["embedded"]

    def test_dipped_seed_reaches_past_tip(self, unit_circle):
        from weakplateau.core.pipeline import dipped_seed
        seed = dipped_seed(unit_circle, tip=[0.0, 0.0, -0.4], depth=-0.4, normal=[0.0, 0.0, 1.0], margin=0.1, refine_levels=0)
        assert seed.vertices[:, 2].min() == pytest.approx(-0.5)
        assert seed.label == "dipped"


class TestNotWeakExtreme:
    @pytest.mark.slow
    def test_stops_after_classify(self, hooked):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import run_pipeline
        result = run_pipeline(hooked, SolverConfig(refine_levels=2))
        assert result.failed_step == "classify"
        assert result.verdicts["weak_extreme"] is False
        assert not result.ok
        assert result.sigma is None


@pytest.mark.slow
class TestAcceptance:
    """End-to-end runs on gallery curves."""

    @pytest.mark.parametrize("amplitude", [0.2, 0.4, 0.6])
    @pytest.mark.parametrize("lobes", [2, 3, 4])
    def test_extreme_free_solve_embedded(self, lobes, amplitude):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.hull import contains, hull_or_planar
        from weakplateau.core.meshing import initial_disk
        from weakplateau.core.pipeline import is_embedded
        from weakplateau.core.solver import minimize_area
        from weakplateau.gallery import sphere_wave
        curve = sphere_wave(1.0, lobes, amplitude, 120)
        config = SolverConfig(refine_levels=2)
        mesh, _ = minimize_area(initial_disk(curve, config.refine_levels), config, raise_on_failure=False)
        assert is_embedded(mesh)
        hull = hull_or_planar(curve.vertices)
        assert contains(hull, mesh.vertices).all()

    @pytest.mark.parametrize("r,w", [(3.0, 0.15), (4.0, 0.2), (5.0, 0.3)])
    def test_weak_extreme_ring(self, r, w):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import run_pipeline
        from weakplateau.gallery import weak_extreme_rw
        result = run_pipeline(weak_extreme_rw(r, w, 240), SolverConfig(refine_levels=2))
        assert result.verdicts["weak_extreme"]
        assert result.mode == "SingleCoreMode"
        assert result.verdicts["embedded"]
        assert result.verdicts["residual"] < 1e-4
        assert result.verdicts["stable_probe"]
        assert result.verdicts["inside_z"]
        trace = result.stats["sigma"].area_trace
        assert all(b <= a + 1e-11 * trace[0] for a, b in zip(trace, trace[1:]))

    def test_hooked_circle_self_intersects(self, hooked):
        from weakplateau.core.classifier import analyze
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import patched_projection_seed
        from weakplateau.core.intersections import mesh_self_intersections
        from weakplateau.core.solver import minimize_area
        config = SolverConfig(refine_levels=2)
        analysis = analyze(hooked, config)
        assert analysis.report.condition3 == [False]
        assert "condition3.hook0" in analysis.report.witnesses
        seed = patched_projection_seed(analysis.decomposition, config)
        assert seed is not None
        mesh, _ = minimize_area(seed, config, raise_on_failure=False)
        assert not mesh_self_intersections(mesh).empty

    def test_thin_hook_beats_pipeline(self):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import compare_unconstrained, run_pipeline
        from weakplateau.gallery import rw_thin_hook
        curve = rw_thin_hook()
        config = SolverConfig(refine_levels=2)
        result = run_pipeline(curve, config)
        assert result.verdicts["weak_extreme"]
        assert result.verdicts["embedded"]
        comp = compare_unconstrained(curve, config, result=result)
        L = curve.diagonal
        lower = [c for c in comp.candidates if c["area"] < result.sigma.area - 1e-6 * L ** 2]
        assert lower
        assert any(not c["embedded"] and c["intersection_length"] > 0 for c in lower)

    def test_tail_removes_tip_obstruction(self):
        from weakplateau.core.classifier import analyze
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import compare_unconstrained, genus_witness
        from weakplateau.gallery import fig6_config, fig6_tail
        config = SolverConfig(refine_levels=2)
        reports, best = {}, {}
        for name, curve in (("base", fig6_config()), ("tail", fig6_tail())):
            analysis = analyze(curve, config)
            comp = compare_unconstrained(curve, config, seeds=("fan", "flat_projection"))
            best[name] = min(c["area"] for c in comp.candidates)
            reports[name] = genus_witness(curve, analysis.hull, comp.meshes, analysis.decomposition, config)
        assert reports["base"]["tip_obstruction"]
        assert reports["tail"]["genus_zero_witness"]
        assert best["tail"] / best["base"] < 1.05

    def test_spiral_multi_loop(self):
        from weakplateau.core.config import SolverConfig
        from weakplateau.core.pipeline import run_pipeline
        from weakplateau.gallery import fig3_config
        result = run_pipeline(fig3_config(), SolverConfig(refine_levels=2, route_mode="shortest_path"))
        assert result.decomposition.multi_loop
        assert result.mode == "MultiLoopMode"
        assert result.sigma is not None
        assert result.verdicts["embedded"]
