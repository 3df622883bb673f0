"""Tests for the pipeline mode selection system."""

import pytest
from unittest.mock import Mock, patch


def _analysis(n=0, cores=1, multi_loop=False, loops=1):
    """Mock analysis with just the fields mode selection reads."""
    d = Mock(n=n, multi_loop=multi_loop, gamma_hat=[Mock()] * loops)
    return Mock(decomposition=d, cores=[Mock()] * cores)


class TestModeSelection:
    """Mode selection on mocked analyses, no solves."""

    def test_mode_classes_can_be_imported(self):
        from weakplateau.modes.extreme import ExtremeFastPath
        from weakplateau.modes.multi_loop import MultiLoopMode
        from weakplateau.modes.single_core import SingleCoreMode

        assert all([ExtremeFastPath, MultiLoopMode, SingleCoreMode])

    def test_extreme_takes_hookless_curves(self):
        """No hooks and one core selects the fast path."""
        from weakplateau.modes import select_mode
        from weakplateau.modes.extreme import ExtremeFastPath

        assert isinstance(select_mode(_analysis(n=0), None), ExtremeFastPath)

    def test_single_core(self):
        from weakplateau.modes import select_mode
        from weakplateau.modes.single_core import SingleCoreMode

        assert isinstance(select_mode(_analysis(n=2), None), SingleCoreMode)

    def test_multi_loop_flag_wins_over_single_core(self):
        """A crossing route marks the decomposition multi-loop even with one loop."""
        from weakplateau.modes import select_mode
        from weakplateau.modes.multi_loop import MultiLoopMode

        mode = select_mode(_analysis(n=1, multi_loop=True), None)
        assert isinstance(mode, MultiLoopMode)

    def test_multi_loop_needs_a_core_per_loop(self):
        from weakplateau.modes.multi_loop import MultiLoopMode
        mode = MultiLoopMode()

        assert mode.can_run(_analysis(n=1, cores=2, loops=2), None) is True
        assert mode.can_run(_analysis(n=1, cores=1, loops=2), None) is False

    def test_single_core_rejects_multi_loop(self):
        from weakplateau.modes.single_core import SingleCoreMode
        mode = SingleCoreMode()

        assert mode.can_run(_analysis(n=1, multi_loop=True), None) is False
        assert mode.can_run(_analysis(n=1, cores=2), None) is False

    def test_no_mode_raises(self):
        """Hooks with a missing core loop leave nothing to run."""
        from weakplateau.modes import select_mode

        with pytest.raises(RuntimeError, match="No valid pipeline mode"):
            select_mode(_analysis(n=1, cores=0), None)

    def test_failing_check_is_skipped(self):
        """A mode whose can_run raises is logged and passed over."""
        from weakplateau.modes import MODES, select_mode
        from weakplateau.modes.single_core import SingleCoreMode

        with patch.object(MODES[0], "can_run", side_effect=ValueError("boom")):
            mode = select_mode(_analysis(n=1), None)
        assert isinstance(mode, SingleCoreMode)


class TestModeSignatures:
    """All modes follow the PipelineMode interface."""

    def test_all_modes_subclass_base(self):
        from weakplateau.modes import MODES
        from weakplateau.modes.base import PipelineMode

        for mode in MODES:
            assert isinstance(mode, PipelineMode)
            assert callable(mode.can_run)
            assert callable(mode.run)

    def test_base_is_abstract(self):
        from weakplateau.modes.base import PipelineMode

        with pytest.raises(TypeError):
            PipelineMode()

    def test_order(self):
        """The fast path is tried first and the single-core mode last."""
        from weakplateau.modes import MODES

        names = [m.__class__.__name__ for m in MODES]
        assert names == ["ExtremeFastPath", "MultiLoopMode", "SingleCoreMode"]
