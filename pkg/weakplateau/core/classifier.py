"""Weak-extreme verdicts: hook tightness, hook hulls, core stabbing and side assignment."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from weakplateau.core.config import SolverConfig, Tolerances
from weakplateau.core.decomposition import Decomposition, build_signed_curves, decompose
from weakplateau.core.geometry import (
    JordanCurve,
    linking_number,
    total_curvature,
    validate_curve,
)
from weakplateau.core.hull import ConvexHull, contains, hull_or_planar, is_extreme_curve
from weakplateau.core.intersections import segment_mesh_intersect
from weakplateau.core.meshing import initial_disk, stack_meshes
from weakplateau.core.regions import Barrier, crossing_parity
from weakplateau.core.solver import minimize_area
from weakplateau.errors import (
    CurvesTooClose,
    DegenerateHull,
    InvalidCurve,
    NonIntegerResult,
    SideAmbiguous,
)

log = logging.getLogger(__name__)

FOUR_PI = 4.0 * np.pi
MAX_SIDE_SAMPLES = 16


class ClassificationReport(BaseModel):
    is_tame: bool = True
    n_hooks: int = 0
    condition1: list[bool] = Field(default_factory=list)
    condition2: list[list[bool]] = Field(default_factory=list)
    condition3: list[bool] = Field(default_factory=list)
    is_weak_extreme: bool = False
    is_extreme: bool = False
    total_curvature: float = 0.0
    eww_flag: bool = False
    plus: list[int] = Field(default_factory=list)
    minus: list[int] = Field(default_factory=list)
    linking: list[list[Optional[int]]] = Field(default_factory=list)
    multi_loop: bool = False
    route_mode: str = ""
    core_loops: int = 0
    core_area: float = 0.0
    overridden: bool = False
    diagnostics: list[str] = Field(default_factory=list)
    witnesses: dict[str, list[float]] = Field(default_factory=dict)

    def to_dict(self) -> dict:
        return self.model_dump()


@dataclass(eq=False)
class Analysis:
    """Everything the classifier built on the way to its report."""

    curve: JordanCurve
    hull: ConvexHull
    decomposition: Decomposition
    cores: list = field(default_factory=list)
    core_stats: list = field(default_factory=list)
    report: ClassificationReport = None


def check_condition1(d: Decomposition, tol_scale: float = 1.0, witnesses: dict = None) -> list:
    """Each closed hook (beta plus its route) is an extreme curve."""
    out = []
    for i, closed in enumerate(d.hook_curves):
        ok = is_extreme_curve(JordanCurve(closed), tol_scale)
        if not ok and witnesses is not None:
            hull = hull_or_planar(closed, tol_scale)
            k = int(np.argmin(hull.signed_distance(closed)))
            witnesses[f"condition1.hook{i}"] = closed[k].tolist()
        out.append(bool(ok))
    return out


def segments_meet_hull(p, q, hull: ConvexHull, trim_start=None, trim_end=None):
    """Clip segments p -> q against the hull's halfspaces.

    Returns (hit mask, a witness point per segment). trim_start / trim_end
    give parameters below / above which a segment does not count.
    """
    p = np.asarray(p, dtype=float).reshape(-1, 3)
    q = np.asarray(q, dtype=float).reshape(-1, 3)
    n_seg = len(p)
    lo = np.zeros(n_seg) if trim_start is None else np.asarray(trim_start, dtype=float)
    hi = np.ones(n_seg) if trim_end is None else np.asarray(trim_end, dtype=float)
    normals, offsets = hull.equations[:, :3], hull.equations[:, 3]
    slack = hull.tol.surface
    a = p @ normals.T + offsets - slack  # value at t = 0
    b = (q - p) @ normals.T  # rate in t
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -a / b
    entering = b < 0
    leaving = b > 0
    parallel_out = (b == 0) & (a > 0)
    lo = np.maximum(lo, np.where(entering, t, -np.inf).max(axis=1))
    hi = np.minimum(hi, np.where(leaving, t, np.inf).min(axis=1))
    hit = (lo <= hi) & ~parallel_out.any(axis=1)
    mid = np.clip(0.5 * (lo + hi), 0.0, 1.0)
    return hit, p + mid[:, None] * (q - p)


def check_condition2(d: Decomposition, tol_scale: float = 1.0, witnesses: dict = None):
    """CH(beta_i) misses beta_j for every ordered pair; linking numbers as a diagnostic.

    Returns (matrix, linking) with True on the diagonal and None for
    linking numbers that could not be resolved.
    """
    n = d.n
    matrix = [[True] * n for _ in range(n)]
    linking = [[None] * n for _ in range(n)]
    if n <= 1:
        return matrix, linking
    hulls = []
    for hook in d.hooks:
        try:
            hulls.append(hull_or_planar(hook.beta, tol_scale))
        except DegenerateHull:
            # collinear arc: its hull is the chord itself
            hulls.append(None)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            beta_j = d.hooks[j].beta
            p, q = beta_j[:-1], beta_j[1:]
            if hulls[i] is None:
                continue
            hull = hulls[i]
            shared = [x for x in d.hooks[i].endpoints if any(np.array_equal(x, y) for y in d.hooks[j].endpoints)]
            length = np.maximum(np.linalg.norm(q - p, axis=1), 1e-300)
            margin = 10.0 * hull.tol.surface / length
            start = np.zeros(len(p))
            end = np.ones(len(p))
            for x in shared:
                start = np.where(np.all(p == x, axis=1), margin, start)
                end = np.where(np.all(q == x, axis=1), 1.0 - margin, end)
            hit, where = segments_meet_hull(p, q, hull, start, end)
            if np.any(hit):
                matrix[i][j] = False
                if witnesses is not None:
                    witnesses[f"condition2.hull{i}.hook{j}"] = where[np.argmax(hit)].tolist()
    for i in range(n):
        for j in range(i + 1, n):
            try:
                value = linking_number(JordanCurve(d.hook_curves[i]), JordanCurve(d.hook_curves[j]), tol_scale)
            except (CurvesTooClose, NonIntegerResult) as e:
                log.debug(f"linking of hooks {i},{j} unresolved: {e}")
                value = None
            linking[i][j] = linking[j][i] = value
    return matrix, linking


def solve_core(d: Decomposition, hull: ConvexHull, config: SolverConfig = None, stats: list = None) -> list:
    """Least-area disk on every loop of gamma hat; several loops give a piecewise core.

    Solver stats are appended to `stats` when given.
    """
    config = config or SolverConfig()
    cores = []
    d.core_loops = []
    for j, loop in enumerate(d.gamma_hat):
        if len(loop) < 3:
            log.warning(f"core loop {j} has {len(loop)} vertices; skipped")
            continue
        seed = initial_disk(JordanCurve(loop), config.refine_levels)
        seed.label = "core" if len(d.gamma_hat) == 1 else f"core_{j}"
        mesh, solve_stats = minimize_area(seed, config)
        if stats is not None:
            stats.append(solve_stats)
        outside = ~contains(hull, mesh.vertices, slack=max(hull.tol.surface, 1e-6 * hull.tol.L))
        if np.any(outside):
            log.warning(f"{seed.label}: {int(outside.sum())} vertices left the hull")
        cores.append(mesh)
        d.core_loops.append(j)
    return cores


def check_condition3(d: Decomposition, cores, tol_scale: float = 1.0, witnesses: dict = None) -> list:
    """No beta_i meets the core beyond its own endpoints; grazing counts as meeting."""
    if d.n == 0:
        return []
    core = stack_meshes(cores, "core")
    tol = Tolerances.for_points(d.curve.vertices, tol_scale)
    barrier = Barrier(core)
    out = []
    for i, hook in enumerate(d.hooks):
        ends = np.array(hook.endpoints)
        ok = True
        for p, q in zip(hook.beta[:-1], hook.beta[1:]):
            for x, _ in segment_mesh_intersect(p, q, core):
                if np.min(np.linalg.norm(ends - x, axis=1)) > tol.point:
                    ok = False
                    if witnesses is not None:
                        witnesses[f"condition3.hook{i}"] = x.tolist()
                    break
            if not ok:
                break
        if ok and len(hook.interior):
            dist, cp, _ = barrier.closest(hook.interior, tol.surface)
            grazing = np.isfinite(dist)
            if np.any(grazing):
                ok = False
                if witnesses is not None:
                    witnesses[f"condition3.hook{i}"] = cp[np.argmax(grazing)].tolist()
                log.debug(f"hook {i} grazes the core")
        out.append(ok)
    return out


def _side_samples(hook) -> np.ndarray:
    pts = hook.interior
    if len(pts) == 0:
        return 0.5 * (hook.beta[:1] + hook.beta[-1:])
    if len(pts) > MAX_SIDE_SAMPLES:
        pts = pts[np.linspace(0, len(pts) - 1, MAX_SIDE_SAMPLES).round().astype(int)]
    return pts


def partition_sides(d: Decomposition, cores, hull: ConvexHull = None, override: bool = False) -> dict:
    """Assign every hook to + or - by crossing parity against the core.

    + is the side holding hook 0, with one core loop or several.
    """
    if d.n == 0:
        return {}
    core = stack_meshes(cores, "core")
    samples = _side_samples(d.hooks[0])
    dist, _, _ = Barrier(core).closest(samples, np.inf)
    reference = samples[int(np.argmax(dist))]
    d.side_reference, d.reference_side = np.asarray(reference, dtype=float), "+"

    sides = {}
    for i, hook in enumerate(d.hooks):
        parity = crossing_parity(reference, _side_samples(hook), core)
        votes = int(parity.sum())
        if 0 < votes < len(parity):
            if not override:
                raise SideAmbiguous(f"hook {i}: {votes} of {len(parity)} samples cross the core")
            log.warning(f"hook {i}: side vote split {votes}/{len(parity)}, taking the majority")
        sides[i] = "-" if 2 * votes > len(parity) else "+"
    log.debug(f"sides: {sides}")
    return sides


def analyze(curve: JordanCurve, config: SolverConfig = None) -> Analysis:
    """Decompose, solve the core and evaluate all three conditions."""
    config = config or SolverConfig()
    validation = validate_curve(curve, config.tol_scale)
    if not validation.valid:
        raise InvalidCurve("; ".join(validation.failures))
    hull = hull_or_planar(curve.vertices, config.tol_scale)
    kappa = total_curvature(curve)
    report = ClassificationReport(
        is_tame=True,
        total_curvature=kappa,
        eww_flag=bool(kappa < FOUR_PI),
        is_extreme=bool(np.all(hull.on_hull_mask)),
        route_mode=config.route_mode,
        overridden=config.override_classifier,
    )
    d = decompose(curve, config, hull)
    report.n_hooks = d.n
    report.multi_loop = d.multi_loop
    report.diagnostics.extend(d.notes)
    witnesses = {}

    report.condition1 = check_condition1(d, config.tol_scale, witnesses)
    report.condition2, report.linking = check_condition2(d, config.tol_scale, witnesses)
    core_stats = []
    cores = solve_core(d, hull, config, core_stats)
    report.core_loops = len(cores)
    report.core_area = float(sum(c.area for c in cores))
    report.condition3 = check_condition3(d, cores, config.tol_scale, witnesses)

    report.is_weak_extreme = bool(
        all(report.condition1) and all(all(row) for row in report.condition2) and all(report.condition3)
    )
    for i, ok in enumerate(report.condition1):
        if not ok:
            report.diagnostics.append(f"condition 1 fails: closed hook {i} is not extreme")
    for i, row in enumerate(report.condition2):
        for j, ok in enumerate(row):
            if not ok:
                report.diagnostics.append(f"condition 2 fails: hull of hook {i} meets hook {j}")
    for i, ok in enumerate(report.condition3):
        if not ok:
            report.diagnostics.append(f"condition 3 fails: hook {i} meets the core")

    if report.is_weak_extreme or config.override_classifier:
        try:
            sides = partition_sides(d, cores, hull, override=config.override_classifier)
        except SideAmbiguous as e:
            report.diagnostics.append(str(e))
            report.is_weak_extreme = False
            sides = {}
        build_signed_curves(d, sides)
        report.plus = d.plus
        report.minus = d.minus

    verdict = "weak-extreme" if report.is_weak_extreme else "not weak-extreme"
    log.info(f"[CLASSIFY] {d.n} hooks, {verdict}, total curvature {kappa:.4f}")
    return Analysis(curve=curve, hull=hull, decomposition=d, cores=cores, core_stats=core_stats, report=report)


def classify(curve: JordanCurve, config: SolverConfig = None) -> ClassificationReport:
    return analyze(curve, config).report
