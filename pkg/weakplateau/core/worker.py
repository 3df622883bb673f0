"""Thread pool for independent sub-solves."""

import logging
from concurrent.futures import ThreadPoolExecutor

from weakplateau.reports.state import update_progress

log = logging.getLogger(__name__)


def run_parallel(tasks, jobs: int = 1, label: str = "tasks"):
    """Run zero-argument callables on `jobs` threads; results come back in task order.

    The first exception raised by a task is re-raised after all tasks finish.
    """
    tasks = list(tasks)
    total = len(tasks)
    if total == 0:
        return []
    results = [None] * total
    errors = [None] * total
    done = 0

    def run(k):
        try:
            results[k] = tasks[k]()
        except Exception as e:
            log.error(f"[WORKER] {label} #{k} failed: {e}")
            errors[k] = e

    if jobs <= 1 or total == 1:
        for k in range(total):
            run(k)
            done += 1
            update_progress(done / total, done, total)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for _ in pool.map(run, range(total)):
                done += 1
                update_progress(done / total, done, total)
    log.debug(f"[WORKER] {label}: {total} finished on {min(jobs, total)} threads")
    for e in errors:
        if e is not None:
            raise e
    return results
