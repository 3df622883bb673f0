"""Solver configuration, environment overrides and scale-relative tolerances."""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

ROUTE_MODES = ("straight_preferred", "shortest_path")
# CLI spellings
ROUTE_ALIASES = {"straight": "straight_preferred", "shortest": "shortest_path"}


def get_output_dir() -> Path:
    """Run-directory base: PLATEAU_OUTPUT_DIR if set, else ./outputs."""
    custom = os.environ.get("PLATEAU_OUTPUT_DIR")
    return Path(custom) if custom else Path("outputs")


def _env_float(name: str):
    raw = os.environ.get(name)
    return float(raw) if raw else None


def _env_int(name: str):
    raw = os.environ.get(name)
    return int(raw) if raw else None


class SolverConfig(BaseModel):
    """Knobs shared by every solve, decomposition and pipeline step."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iterations: int = Field(2000, gt=0)
    area_tol: float = Field(1e-7, gt=0, lt=1)
    residual_tol: float = Field(1e-4, gt=0)
    refine_levels: int = Field(3, ge=0, le=6)
    # fraction of the bounding-box diagonal
    barrier_offset: float = Field(1e-3, gt=0)
    steiner_per_edge: int = Field(4, gt=0)
    route_mode: Literal["straight_preferred", "shortest_path"] = "straight_preferred"
    min_run: int = Field(2, gt=0)
    route_retries: int = Field(8, ge=0)
    flip_threshold: float = Field(0.05, gt=0, le=1)
    probe_amplitude: float = Field(1e-3, gt=0)
    probe_trials: int = Field(50, gt=0)
    tol_scale: float = Field(1.0, gt=0)
    jobs: int = Field(1, gt=0)
    seed: int = 0
    override_classifier: bool = False

    @field_validator("route_mode", mode="before")
    @classmethod
    def _short_route_names(cls, v):
        return ROUTE_ALIASES.get(v, v)

    @classmethod
    def from_env(cls, **overrides) -> "SolverConfig":
        """Defaults, then PLATEAU_* variables, then explicit overrides."""
        values = {}
        env = {
            "tol_scale": _env_float("PLATEAU_TOL_SCALE"),
            "jobs": _env_int("PLATEAU_JOBS"),
            "max_iterations": _env_int("PLATEAU_MAX_ITERS"),
        }
        values.update({k: v for k, v in env.items() if v is not None})
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "SolverConfig":
        return self.model_copy(update=changes)


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances derived from the bounding-box diagonal L."""

    L: float
    point: float
    surface: float

    @classmethod
    def for_points(cls, points, scale: float = 1.0) -> "Tolerances":
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        L = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))) if len(pts) else 1.0
        if L <= 0.0:
            L = 1.0
        return cls(L=L, point=1e-9 * L * scale, surface=1e-7 * L * scale)
