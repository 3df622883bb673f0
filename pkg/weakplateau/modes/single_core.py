"""Weak-extreme curves whose gamma hat is one embedded loop."""

from weakplateau.core.pipeline import run_theorem_steps
from weakplateau.modes.base import PipelineMode


class SingleCoreMode(PipelineMode):

    def can_run(self, analysis, config) -> bool:
        d = analysis.decomposition
        return d.n > 0 and not d.multi_loop and len(analysis.cores) == 1

    def run(self, result):
        return run_theorem_steps(result)
