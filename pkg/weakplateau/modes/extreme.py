"""Extreme curves: the core already is the answer."""

import logging

from weakplateau.core.pipeline import final_verdicts
from weakplateau.modes.base import PipelineMode

log = logging.getLogger(__name__)


class ExtremeFastPath(PipelineMode):
    """No hooks, so T+ = T- = core and the final disk is the free solve."""

    def can_run(self, analysis, config) -> bool:
        return analysis.decomposition.n == 0 and len(analysis.cores) == 1

    def run(self, result):
        core = result.cores[0]
        result.t_plus = [core]
        result.t_minus = [core]
        result.seed = core
        result.sigma = core.copy()
        result.sigma.label = "sigma"
        stats = result.analysis.core_stats[0]
        result.stats["sigma"] = stats
        result.verdicts.update(final_verdicts(result.sigma, core, stats, result.config, None, result.curve))
        log.info(f"[FAST PATH] extreme curve, sigma area {result.sigma.area:.6g}")
        return result
