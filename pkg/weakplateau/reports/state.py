"""Runtime state tracking."""

import threading
import time

_lock = threading.Lock()

state = {
    "stage": "Idle",
    "progress": 0.0,
    "step": 0,
    "total_steps": 0,
    "timings": {},
    "last_update": time.time(),
}


def update_stage(stage: str):
    """Update current pipeline stage."""
    with _lock:
        state["stage"] = stage
        state["last_update"] = time.time()


def update_progress(p: float, step: int = 0, total_steps: int = 0):
    """Update progress (0.0 to 1.0) and step counts."""
    with _lock:
        state["progress"] = float(p)
        state["step"] = step
        state["total_steps"] = total_steps
        state["last_update"] = time.time()


def record_timing(name: str, seconds: float):
    with _lock:
        state["timings"][name] = float(seconds)
        state["last_update"] = time.time()


def reset():
    with _lock:
        state.update(stage="Idle", progress=0.0, step=0, total_steps=0, timings={})
        state["last_update"] = time.time()


def snapshot():
    """Get current state snapshot."""
    with _lock:
        out = dict(state)
        out["timings"] = dict(state["timings"])
        return out
