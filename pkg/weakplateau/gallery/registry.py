"""Curve family registry."""

import inspect
import logging
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from weakplateau.core.geometry import JordanCurve
from weakplateau.gallery import families, splice

log = logging.getLogger(__name__)

CURVE_FAMILIES = {
    "circle": families.circle,
    "sphere_wave": families.sphere_wave,
    "crown": families.crown,
    "hooked_circle": families.hooked_circle,
    "fig6_config": families.fig6_config,
    "weak_extreme_rw": families.weak_extreme_rw,
    "fig2_config": families.fig2_config,
    "fig3_config": families.fig3_config,
    "trefoil": families.trefoil,
    "noisy_circle": families.noisy_circle,
    "rw_thin_hook": splice.rw_thin_hook,
    "fig6_tail": splice.fig6_tail,
}

# Splices take an existing curve as their first argument.
SPLICES = {
    "add_thin_hook": splice.add_thin_hook,
    "add_thin_tail": splice.add_thin_tail,
}


class CurveSpec(BaseModel):
    """A family name plus its parameters; equal specs give bit-identical curves."""

    model_config = ConfigDict(frozen=True)

    family: str
    params: dict[str, Union[int, float, list[float]]] = Field(default_factory=dict)
    n: Optional[int] = None
    seed: Optional[int] = None


def family_parameters(name: str) -> dict:
    """Parameter names and defaults of a registered generator."""
    fn = CURVE_FAMILIES.get(name) or SPLICES.get(name)
    if fn is None:
        raise ValueError(f"Unknown curve family: {name}")
    params = list(inspect.signature(fn).parameters.values())
    if name in SPLICES:
        params = params[1:]
    return {p.name: (None if p.default is inspect.Parameter.empty else p.default) for p in params}


def make_curve(spec: CurveSpec, base: JordanCurve = None) -> JordanCurve:
    """Build the curve a spec names. Splices need `base`."""
    known = family_parameters(spec.family)
    kwargs = dict(spec.params)
    if spec.n is not None:
        kwargs["n"] = spec.n
    if spec.seed is not None and "seed" in known:
        kwargs["seed"] = spec.seed
    unknown = sorted(set(kwargs) - set(known))
    if unknown:
        raise ValueError(f"{spec.family} does not take {', '.join(unknown)}")

    if spec.family in SPLICES:
        if base is None:
            raise ValueError(f"{spec.family} needs a base curve")
        curve = SPLICES[spec.family](base, **kwargs)
    else:
        curve = CURVE_FAMILIES[spec.family](**kwargs)
    log.info(f"[GALLERY] {spec.family}: {len(curve)} vertices")
    return curve
