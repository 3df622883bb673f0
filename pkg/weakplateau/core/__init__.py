"""Geometry, hull, solver and the constrained construction."""

from .config import SolverConfig, Tolerances
from .geometry import DiskMesh, JordanCurve, TriMesh

# Pipeline entry points are imported lazily; they pull in the modes package.
__all__ = ["SolverConfig", "Tolerances", "JordanCurve", "DiskMesh", "TriMesh", "classify", "analyze", "run_pipeline", "compare_unconstrained"]


def __getattr__(name):
    """Lazy import for the pipeline entry points."""
    if name in ("classify", "analyze"):
        from . import classifier
        return getattr(classifier, name)
    if name in ("run_pipeline", "compare_unconstrained"):
        from . import pipeline
        return getattr(pipeline, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
