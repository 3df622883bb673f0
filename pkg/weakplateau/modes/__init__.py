"""Pipeline strategy selection."""

import logging

from .extreme import ExtremeFastPath
from .multi_loop import MultiLoopMode
from .single_core import SingleCoreMode

log = logging.getLogger(__name__)

MODES = [
    ExtremeFastPath(),
    MultiLoopMode(),
    SingleCoreMode(),
]


def select_mode(analysis, config):
    """Pick the first strategy that accepts the analysed curve."""
    d = analysis.decomposition
    log.debug("=== MODE SELECTION START ===")
    log.debug(f"hooks = {d.n}, multi_loop = {d.multi_loop}, cores = {len(analysis.cores)}")

    for mode in MODES:
        name = mode.__class__.__name__
        try:
            can_run = mode.can_run(analysis, config)
        except Exception as e:
            log.error(f"[MODE CHECK ERROR] {name}: {e}")
            continue

        log.debug(f"[MODE CHECK] {name}.can_run() -> {can_run}")

        if can_run:
            log.info(f"[MODE SELECTED] {name}")
            return mode

    log.error("no pipeline mode accepted the curve")
    raise RuntimeError("No valid pipeline mode found")


__all__ = ["select_mode", "MODES", "ExtremeFastPath", "SingleCoreMode", "MultiLoopMode"]
