"""Curve gallery: named families and splices."""

from .families import (
    circle,
    crown,
    fig2_config,
    fig3_config,
    fig6_config,
    hooked_circle,
    noisy_circle,
    sphere_wave,
    trefoil,
    weak_extreme_rw,
)
from .registry import CURVE_FAMILIES, SPLICES, CurveSpec, family_parameters, make_curve
from .splice import add_thin_hook, add_thin_tail, fig6_tail, rw_thin_hook

__all__ = [
    "CURVE_FAMILIES",
    "SPLICES",
    "CurveSpec",
    "add_thin_hook",
    "add_thin_tail",
    "circle",
    "crown",
    "family_parameters",
    "fig2_config",
    "fig3_config",
    "fig6_config",
    "fig6_tail",
    "hooked_circle",
    "make_curve",
    "noisy_circle",
    "rw_thin_hook",
    "sphere_wave",
    "trefoil",
    "weak_extreme_rw",
]
