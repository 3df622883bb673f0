"""The run report schema and mesh re-checks."""

import json
import logging
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from weakplateau.core.geometry import TriMesh, euler_characteristic, is_closed_mesh
from weakplateau.core.intersections import mesh_mesh_intersections, mesh_self_intersections
from weakplateau.core.meshing import boundary_loops
from weakplateau.reports.storage import write_json

log = logging.getLogger(__name__)

VOLATILE_KEYS = ("timings", "seconds", "timestamp")


class RunReport(BaseModel):
    """Everything one CLI command produced; written as report.json."""

    model_config = ConfigDict(extra="forbid")

    command: str
    input: str
    input_hash: str
    config: dict[str, Any]
    classification: Optional[dict[str, Any]] = None
    solve: Optional[dict[str, Any]] = None
    pipeline: Optional[dict[str, Any]] = None
    comparison: Optional[dict[str, Any]] = None
    genus: Optional[dict[str, Any]] = None
    check: Optional[dict[str, Any]] = None
    verdicts: dict[str, Any] = Field(default_factory=dict)
    artifacts: dict[str, str] = Field(default_factory=dict)
    timings: dict[str, float] = Field(default_factory=dict)
    exit_code: int = 0

    def failed_verdicts(self) -> list:
        return sorted(k for k, v in self.verdicts.items() if v is False)

    def comparable(self) -> dict:
        """The report without timing fields, for reproducibility checks."""
        return _strip(self.model_dump())

    def write(self, path) -> Path:
        return write_json(path, self.model_dump())

    @classmethod
    def read(cls, path) -> "RunReport":
        return cls.model_validate(json.loads(Path(path).read_text()))


def _strip(value):
    if isinstance(value, dict):
        return {k: _strip(v) for k, v in value.items() if k not in VOLATILE_KEYS}
    if isinstance(value, list):
        return [_strip(v) for v in value]
    return value


def mesh_check(mesh: TriMesh, against: TriMesh = None, tol_scale: float = 1.0) -> dict:
    """Self-intersection report, plus mutual intersections with `against`."""
    hits = mesh_self_intersections(mesh)
    out = {
        "label": mesh.label,
        "vertices": int(len(mesh.vertices)),
        "triangles": int(len(mesh.triangles)),
        "area": mesh.area,
        "euler_characteristic": euler_characteristic(mesh),
        "closed": is_closed_mesh(mesh),
        "boundary_loops": 0 if is_closed_mesh(mesh) else len(boundary_loops(mesh.triangles)),
        "embedded": hits.empty,
        "self_intersections": hits.to_dict(),
    }
    if against is not None:
        mutual = mesh_mesh_intersections(mesh, against, tol_scale)
        out["against"] = against.label
        out["disjoint"] = mutual.empty
        out["mutual_intersections"] = mutual.to_dict()
    log.info(f"[CHECK] {mesh.label}: embedded={out['embedded']}" + (f", disjoint={out['disjoint']}" if against is not None else ""))
    return out
