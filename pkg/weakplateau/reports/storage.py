"""Run directories, metadata and the session log."""

import hashlib
import json
import logging
import time
from pathlib import Path

import numpy as np

from weakplateau.core.config import get_output_dir

log = logging.getLogger(__name__)


def new_run_dir(base: Path = None) -> Path:
    """Fresh timestamped directory under the output base; collisions get a _n suffix."""
    base = Path(base) if base is not None else get_output_dir()
    base.mkdir(exist_ok=True, parents=True)
    stamp = time.strftime("%Y-%m-%d_%H-%M-%S")
    run = base / stamp
    k = 1
    while run.exists():
        run = base / f"{stamp}_{k}"
        k += 1
    run.mkdir()
    return run


def input_hash(vertices) -> str:
    """sha256 of the float64 vertex buffer."""
    data = np.ascontiguousarray(np.asarray(vertices, dtype=np.float64))
    return hashlib.sha256(data.tobytes()).hexdigest()


def write_json(path: Path, data) -> Path:
    """Deterministic JSON: sorted keys, two-space indent."""
    path = Path(path)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return value.as_posix()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_meta(run: Path, config, vertices, command: str, extra: dict = None) -> Path:
    """meta.json: config snapshot, input hash and the command that made the run."""
    meta = {
        "command": command,
        "config": config.model_dump(),
        "input_hash": input_hash(vertices),
        "vertex_count": int(len(vertices)),
        "timestamp": time.time(),
    }
    if extra:
        meta.update(extra)
    return write_json(Path(run) / "meta.json", meta)


def append_session_entry(entry: dict, base: Path = None) -> Path:
    """Append entry to the session log next to the run directories."""
    base = Path(base) if base is not None else get_output_dir()
    session_log = base / "session_log.json"
    session_log.parent.mkdir(exist_ok=True, parents=True)

    if session_log.exists():
        try:
            data = json.loads(session_log.read_text())
        except json.JSONDecodeError:
            log.warning(f"session log {session_log} is corrupt, starting a new one")
            data = []
    else:
        data = []

    data.append(entry)
    session_log.write_text(json.dumps(data, indent=2, default=_jsonable))
    return session_log


def config_hash(config) -> str:
    """Short digest of a config snapshot, stamped into mesh headers."""
    text = json.dumps(config.model_dump(), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]
