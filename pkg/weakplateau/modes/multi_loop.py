"""Gamma hat split into several loops: one T+ per loop, one T- for the rest."""

import logging

from weakplateau.core.decomposition import build_signed_curves
from weakplateau.core.pipeline import multi_loop_signed_curves, run_theorem_steps
from weakplateau.errors import SideAmbiguous
from weakplateau.modes.base import PipelineMode

log = logging.getLogger(__name__)


class MultiLoopMode(PipelineMode):

    def can_run(self, analysis, config) -> bool:
        d = analysis.decomposition
        return d.n > 0 and len(analysis.cores) == len(d.gamma_hat) and (d.multi_loop or len(d.gamma_hat) > 1)

    def run(self, result):
        d = result.decomposition
        try:
            multi_loop_signed_curves(d)
        except SideAmbiguous as e:
            if not result.config.override_classifier:
                raise
            # a plus hook whose route was cut by a crossing moves to the minus side
            log.warning(f"{e}; moving split hooks to the minus side")
            sides = {i: ("-" if s == "+" else s) for i, s in d.side_assignment.items()}
            build_signed_curves(d, sides)
            multi_loop_signed_curves(d)
            result.notes.append("plus hooks moved to the minus side")
        log.info(f"[MULTI LOOP] {len(d.gamma_hat)} core loops, plus hooks {d.plus}, minus hooks {d.minus}")
        return run_theorem_steps(result)
