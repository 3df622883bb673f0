"""Constrained construction of an embedded stable disk, and the unconstrained comparison runs."""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from weakplateau.core.classifier import Analysis, analyze
from weakplateau.core.config import SolverConfig, Tolerances
from weakplateau.core.decomposition import Decomposition
from weakplateau.core.geometry import (
    DiskMesh,
    JordanCurve,
    TriMesh,
    best_fit_plane,
    euler_characteristic,
    triangle_normals,
)
from weakplateau.core.hull import ConvexHull, contains, hull_or_planar, on_hull
from weakplateau.core.intersections import mesh_mesh_intersections, mesh_self_intersections, mesh_volume
from weakplateau.core.meshing import (
    check_closed,
    disk_from_triangles,
    fan_disk,
    flat_projection_disk,
    initial_disk,
    orient_consistently,
    refine,
    stack_meshes,
    weld,
)
from weakplateau.core.regions import Region, carve_region, closed_region, crossing_parity, hull_region, side_region
from weakplateau.core.solver import minimize_area, minimize_area_constrained, stability_probe
from weakplateau.core.worker import run_parallel
from weakplateau.errors import CarveFailed, NotClosed, NotEmbedded, SideAmbiguous, WeldFailed
from weakplateau.reports.state import record_timing, update_stage

log = logging.getLogger(__name__)

COMPARISON_SEEDS = ("fan", "pipeline", "flat_projection", "piecewise")
SIDE_POINT_CANDIDATES = 64


@dataclass(eq=False)
class PipelineResult:
    curve: JordanCurve
    config: SolverConfig
    analysis: Analysis
    mode: str = ""
    t_plus: list = field(default_factory=list)
    t_minus: list = field(default_factory=list)
    regions: dict = field(default_factory=dict)
    hook_regions: list = field(default_factory=list)
    hook_disks: list = field(default_factory=list)
    t_tilde: TriMesh = None
    z: Region = None
    seed: DiskMesh = None
    sigma: DiskMesh = None
    stats: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    failed_step: str = None
    notes: list = field(default_factory=list)
    genus_restricted: bool = True

    @property
    def decomposition(self) -> Decomposition:
        return self.analysis.decomposition

    @property
    def cores(self) -> list:
        return self.analysis.cores

    @property
    def ok(self) -> bool:
        """No step aborted and every boolean verdict holds."""
        return self.failed_step is None and all(v for v in self.verdicts.values() if isinstance(v, bool))

    @property
    def delta(self) -> float:
        return Tolerances.for_points(self.curve.vertices, self.config.tol_scale).L * self.config.barrier_offset

    def meshes(self) -> dict:
        """Every surface built so far, keyed by file stem."""
        out = {}
        for k, core in enumerate(self.cores):
            out["core" if len(self.cores) == 1 else f"core_{k}"] = core
        for name, group in (("t_plus", self.t_plus), ("t_minus", self.t_minus)):
            for k, mesh in enumerate(group):
                out[name if len(group) == 1 else f"{name}_{k}"] = mesh
        for i, disk in enumerate(self.hook_disks):
            if disk is not None:
                out[f"d_{i}"] = disk
        if self.t_tilde is not None:
            out["t_tilde"] = self.t_tilde
        if self.seed is not None:
            out["sigma_prime"] = self.seed
        if self.sigma is not None:
            out["sigma"] = self.sigma
        return out

    def summary(self) -> dict:
        def area(mesh):
            return None if mesh is None else mesh.area

        return {
            "mode": self.mode,
            "failed_step": self.failed_step,
            "ok": self.ok,
            "n_hooks": self.decomposition.n,
            "plus": self.decomposition.plus,
            "minus": self.decomposition.minus,
            "areas": {
                "core": float(sum(c.area for c in self.cores)),
                "t_plus": [m.area for m in self.t_plus],
                "t_minus": [m.area for m in self.t_minus],
                "hook_disks": [area(d) for d in self.hook_disks],
                "sigma_prime": area(self.seed),
                "sigma": area(self.sigma),
            },
            "solves": {k: s.to_dict() for k, s in self.stats.items()},
            "verdicts": dict(self.verdicts),
            "witnesses": dict(self.witnesses),
            "timings": dict(self.timings),
            "notes": list(self.notes),
            "genus_restricted": self.genus_restricted,
            "decomposition": self.decomposition.summary(),
        }


@contextmanager
def _step(result: PipelineResult, name: str):
    update_stage(name)
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        result.timings[name] = elapsed
        record_timing(name, elapsed)


def is_embedded(mesh: TriMesh) -> bool:
    return mesh_self_intersections(mesh).empty


def _interior_feasible(mesh: DiskMesh, region: Region) -> bool:
    return bool(np.all(region.feasible(mesh.vertices[mesh.interior_mask])))


def _solve_loop(points, region: Region, config: SolverConfig, label: str):
    seed = initial_disk(JordanCurve(points), config.refine_levels)
    seed.label = label
    return minimize_area_constrained(seed, region, config)


def point_on_side(cores, wall: TriMesh, reference, same_side: bool, hull: ConvexHull, delta: float):
    """A point inside the hull, just off one of the cores, on the requested side of wall.

    same_side asks for the side holding reference. The point is taken next
    to `cores`, so a region walled by a single core gets a point it can see.
    """
    reference = np.asarray(reference, dtype=float)
    want = 0 if same_side else 1
    for core in cores:
        normals = triangle_normals(core.vertices, core.triangles)
        normals /= np.maximum(np.linalg.norm(normals, axis=1, keepdims=True), 1e-300)
        interior = np.nonzero(core.interior_mask)[0]
        centre = core.vertices.mean(axis=0)
        interior = interior[np.argsort(np.linalg.norm(core.vertices[interior] - centre, axis=1))]
        for k in interior[:SIDE_POINT_CANDIDATES]:
            tri = int(np.nonzero(np.any(core.triangles == k, axis=1))[0][0])
            for sign in (1.0, -1.0):
                x = core.vertices[k] + sign * 4.0 * delta * normals[tri]
                if hull.signed_distance(x)[0] >= -hull.tol.surface:
                    continue
                if crossing_parity(reference, x, wall)[0] == want:
                    return x
    raise CarveFailed(f"no point found on the {'near' if same_side else 'far'} side of the core")


def multi_loop_signed_curves(d: Decomposition) -> list:
    """Gamma-hat plus, one loop per core loop, for a split gamma hat.

    A plus hook's route has to run inside a single loop, where it is
    replaced by the hook itself.
    """
    loops = [np.array(g) for g in d.gamma_hat]
    for i in d.plus:
        hook = d.hooks[i]
        route = hook.route
        placed = False
        for j, loop in enumerate(loops):
            starts = np.nonzero(np.all(loop == route[0], axis=1))[0]
            for s in starts:
                rolled = np.roll(loop, -int(s), axis=0)
                if len(rolled) >= len(route) and np.array_equal(rolled[: len(route)], route):
                    loops[j] = np.vstack([hook.beta, rolled[len(route):]])
                    placed = True
                    break
            if placed:
                break
        if not placed:
            raise SideAmbiguous(f"hook {i}: routed arc is split across core loops")
    d.gamma_hat_plus = loops
    return loops


def step1_side_surfaces(d: Decomposition, cores: list, hull: ConvexHull, config: SolverConfig):
    """T+ and T-: least-area disks for gamma-hat plus / minus on their side of the core.

    Returns (t_plus, t_minus, regions, stats). A side with no hooks keeps the core.
    """
    delta = Tolerances.for_points(d.curve.vertices, config.tol_scale).L * config.barrier_offset
    merged = stack_meshes(cores, "core")
    ref, ref_side = d.side_reference, d.reference_side
    regions, stats = {}, {}
    t_plus, t_minus = [], []

    if not d.plus:
        t_plus = [c.copy() for c in cores]
    elif len(cores) == 1:
        point = point_on_side(cores, merged, ref, ref_side == "+", hull, delta)
        regions["omega+"] = side_region(hull, merged, point, delta, "omega+")
        for k, loop in enumerate(d.gamma_hat_plus):
            mesh, stats[f"t_plus_{k}"] = _solve_loop(loop, regions["omega+"], config, "t_plus")
            t_plus.append(mesh)
    else:
        by_loop = dict(zip(d.core_loops or range(len(cores)), cores))
        for j, loop in enumerate(d.gamma_hat_plus):
            core = by_loop.get(j)
            if core is None:
                raise WeldFailed(f"gamma hat loop {j} has no core disk")
            if np.array_equal(loop, d.gamma_hat[j]):
                t_plus.append(core.copy())
                continue
            point = point_on_side([core], merged, ref, ref_side == "+", hull, delta)
            label = f"omega+_{j}"
            regions[label] = side_region(hull, core, point, delta, label)
            mesh, stats[f"t_plus_{j}"] = _solve_loop(loop, regions[label], config, f"t_plus_{j}")
            t_plus.append(mesh)

    if not d.minus:
        t_minus = [c.copy() for c in cores]
    else:
        point = point_on_side(cores, merged, ref, ref_side == "-", hull, delta)
        regions["omega-"] = side_region(hull, merged, point, delta, "omega-")
        for k, loop in enumerate(d.gamma_hat_minus):
            mesh, stats[f"t_minus_{k}"] = _solve_loop(loop, regions["omega-"], config, "t_minus")
            t_minus.append(mesh)
    for mesh in (*t_plus, *t_minus):
        mesh.label = mesh.label.replace("core", "t")
    return t_plus, t_minus, regions, stats


def step2_hook_disks(d: Decomposition, t_plus: list, t_minus: list, config: SolverConfig):
    """Least-area D_i in the part of CH(closed hook) cut off by T+ (or T-) that holds l_i.

    Returns (disks, regions, stats, disjoint) where disjoint[i] says D_i misses its wall.
    """
    delta = Tolerances.for_points(d.curve.vertices, config.tol_scale).L * config.barrier_offset
    walls = {"+": stack_meshes(t_plus, "t_plus"), "-": stack_meshes(t_minus, "t_minus")}
    regions = []
    tasks = []
    for i, hook in enumerate(d.hooks):
        wall = walls[d.side_assignment[i]]
        samples = 0.5 * (hook.route[:-1] + hook.route[1:])
        region = carve_region(d.hook_curves[i], wall, samples, delta, f"Y_{i}", config.tol_scale)
        regions.append(region)
        tasks.append(lambda i=i, region=region: _solve_loop(d.hook_curves[i], region, config, f"d_{i}"))

    solved = run_parallel(tasks, config.jobs, "hook disks")
    disks = [mesh for mesh, _ in solved]
    stats = {f"d_{i}": s for i, (_, s) in enumerate(solved)}
    disjoint = []
    for i, disk in enumerate(disks):
        wall = walls[d.side_assignment[i]]
        hits = mesh_mesh_intersections(disk, wall, config.tol_scale)
        if not hits.empty:
            log.warning(f"[STEP 2] D_{i} meets its wall along {hits.total_length():.3e}")
        disjoint.append(hits.empty)
    return disks, regions, stats, disjoint


def step3_verify_disjoint(disks: list, sides: dict = None, tol_scale: float = 1.0):
    """Pairwise disjointness of hook disks. Returns (ok, witnesses)."""
    sides = sides or {}
    witnesses = {}
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            hits = mesh_mesh_intersections(disks[i], disks[j], tol_scale)
            if not hits.empty:
                cross = sides.get(i) != sides.get(j)
                log.warning(f"[STEP 3] D_{i} and D_{j} intersect{' across sides' if cross else ''}")
                witnesses[f"d_{i}|d_{j}"] = hits.points()[0].tolist()
    return not witnesses, witnesses


def step4_assemble_Z(t_plus: list, t_minus: list, disks: list, hull: ConvexHull = None, delta: float = 0.0):
    """Weld T+, T- and the hook disks into the closed surface bounding Z.

    Returns (region, closed mesh). Raises WeldFailed, NotClosed or NotEmbedded.
    """
    welded = weld([*t_plus, *t_minus, *disks], label="t_tilde")
    check_closed(welded)
    mesh = TriMesh(welded.vertices, orient_consistently(welded.triangles), label="t_tilde")
    if mesh_volume(mesh) < 0:
        mesh.triangles = mesh.triangles[:, [0, 2, 1]]
    hits = mesh_self_intersections(mesh)
    if not hits.empty:
        raise NotEmbedded(f"welded boundary self-intersects along {hits.total_length():.3e}")
    log.info(f"[STEP 4] closed surface: {len(mesh.triangles)} triangles, Euler characteristic {euler_characteristic(mesh)}")
    return closed_region(mesh, delta, "Z", hull), mesh


def glue_seed(d: Decomposition, cores: list, disks: list) -> DiskMesh:
    """Core and hook disks identified along the routes, as one disk on the curve."""
    welded = weld([*cores, *disks], label="sigma_prime")
    return disk_from_triangles(welded.vertices, welded.triangles, JordanCurve(d.augmented_curve), "sigma_prime")


def piecewise_seed(d: Decomposition, config: SolverConfig) -> DiskMesh:
    """Unsolved version of glue_seed: fan seeds on every core loop and closed hook."""
    parts = [initial_disk(JordanCurve(loop), config.refine_levels) for loop in d.gamma_hat if len(loop) >= 3]
    parts += [initial_disk(JordanCurve(c), config.refine_levels) for c in d.hook_curves]
    return glue_seed(d, parts, [])


def final_verdicts(sigma: DiskMesh, seed: DiskMesh, stats, config: SolverConfig, z: Region = None, curve: JordanCurve = None) -> dict:
    L = Tolerances.for_points(sigma.vertices[sigma.boundary_loop]).L
    stable, min_delta = stability_probe(sigma, config.probe_amplitude, config.probe_trials, config.seed)
    verdicts = {
        "embedded": is_embedded(sigma),
        "residual": float(stats.residual),
        "residual_ok": bool(stats.residual < config.residual_tol),
        "converged": bool(stats.converged),
        "stable_probe": stable,
        "probe_min_delta": min_delta,
        "area_monotone": bool(sigma.area <= seed.area + 1e-9 * L ** 2),
    }
    if z is not None:
        inside = z.feasible(sigma.vertices[sigma.interior_mask])
        if not np.all(inside):
            barrier = z.barriers[0]
            dist, _, _ = barrier.closest(sigma.vertices[sigma.interior_mask][~inside], z.delta)
            inside[~inside] = np.isfinite(dist)
        verdicts["inside_z"] = bool(np.all(inside))
    if curve is not None:
        boundary = {tuple(x) for x in sigma.vertices[sigma.boundary_loop]}
        verdicts["boundary_exact"] = all(tuple(x) in boundary for x in curve.vertices)
    return verdicts


def step5_final_solve(curve: JordanCurve, z: Region, seed: DiskMesh, config: SolverConfig):
    """Least-area disk on the curve inside Z, started from the glued seed.

    With z None the solve runs unconstrained. Returns (sigma, stats, verdicts).
    """
    if z is None:
        sigma, stats = minimize_area(seed, config, raise_on_failure=False)
    else:
        sigma, stats = minimize_area_constrained(seed, z, config, raise_on_failure=False)
    sigma.label = "sigma"
    verdicts = final_verdicts(sigma, seed, stats, config, z, curve)
    verdicts["constrained"] = z is not None
    return sigma, stats, verdicts


def run_theorem_steps(result: PipelineResult) -> PipelineResult:
    """Steps 1 to 5 on an analysed curve with at least one hook."""
    d, cores, config = result.decomposition, result.cores, result.config
    hull = result.analysis.hull

    with _step(result, "step1"):
        t_plus, t_minus, regions, stats = step1_side_surfaces(d, cores, hull, config)
        result.t_plus, result.t_minus, result.regions = t_plus, t_minus, regions
        result.stats.update(stats)
        embedded = all(is_embedded(m) for m in (*t_plus, *t_minus))
        inside = True
        for name, group in (("omega+", t_plus), ("omega-", t_minus)):
            region = regions.get(name)
            if region is not None:
                inside &= all(_interior_feasible(m, region) for m in group)
        result.verdicts["step1.embedded"] = embedded
        result.verdicts["step1.inside"] = bool(inside)
        log.info(f"[STEP 1] T+ {len(t_plus)} surface(s), T- {len(t_minus)} surface(s), embedded={embedded}")
    if not (embedded and inside):
        result.failed_step = "step1"
        return result

    with _step(result, "step2"):
        disks, hook_regions, stats, disjoint = step2_hook_disks(d, t_plus, t_minus, config)
        result.hook_disks, result.hook_regions = disks, hook_regions
        result.stats.update(stats)
        result.verdicts["step2.disjoint"] = all(disjoint)
        result.verdicts["step2.embedded"] = all(is_embedded(m) for m in disks)
        log.info(f"[STEP 2] {len(disks)} hook disks")
    if not (result.verdicts["step2.disjoint"] and result.verdicts["step2.embedded"]):
        result.failed_step = "step2"
        return result

    with _step(result, "step3"):
        ok, witnesses = step3_verify_disjoint(disks, d.side_assignment, config.tol_scale)
        result.verdicts["step3.disjoint"] = ok
        result.witnesses.update(witnesses)
        log.info(f"[STEP 3] hook disks pairwise disjoint: {ok}")
    if not ok:
        result.failed_step = "step3"
        return result

    z = None
    with _step(result, "step4"):
        try:
            z, result.t_tilde = step4_assemble_Z(t_plus, t_minus, disks, hull, result.delta)
            result.z = z
            result.verdicts["step4.closed"] = True
        except (WeldFailed, NotClosed, NotEmbedded) as e:
            log.warning(f"[STEP 4] {e}; the final solve runs unconstrained")
            result.notes.append(f"step4: {e}")
            result.verdicts["step4.closed"] = False

    with _step(result, "step5"):
        result.seed = glue_seed(d, cores, disks)
        sigma, stats, verdicts = step5_final_solve(JordanCurve(d.augmented_curve), z, result.seed, config)
        result.sigma = sigma
        result.stats["sigma"] = stats
        result.verdicts.update(verdicts)
        log.info(f"[STEP 5] sigma area {sigma.area:.6g}, embedded={verdicts['embedded']}, residual {verdicts['residual']:.2e}")
    return result


def run_pipeline(curve: JordanCurve, config: SolverConfig = None) -> PipelineResult:
    """Classify, pick a strategy and build the final disk."""
    from weakplateau.modes import select_mode

    config = config or SolverConfig.from_env()
    start = time.perf_counter()
    update_stage("classify")
    analysis = analyze(curve, config)
    result = PipelineResult(curve=curve, config=config, analysis=analysis)
    result.timings["classify"] = time.perf_counter() - start
    record_timing("classify", result.timings["classify"])
    report = analysis.report
    result.verdicts["weak_extreme"] = report.is_weak_extreme
    if not report.is_weak_extreme and not config.override_classifier:
        log.warning("curve is not weak-extreme; pipeline stops after classification")
        result.failed_step = "classify"
        update_stage("Idle")
        return result
    if not report.is_weak_extreme:
        result.notes.append("classifier overridden")
        del result.verdicts["weak_extreme"]

    mode = select_mode(analysis, config)
    result.mode = mode.__class__.__name__
    mode.run(result)
    update_stage("Idle")
    return result


# Comparison runs

@dataclass(eq=False)
class Comparison:
    candidates: list = field(default_factory=list)
    meshes: dict = field(default_factory=dict)
    best: str = ""
    pipeline_area: float = None
    notes: list = field(default_factory=list)

    @property
    def gap(self):
        if self.pipeline_area is None or not self.best:
            return None
        best = next(c for c in self.candidates if c["seed"] == self.best)
        return self.pipeline_area - best["area"]

    def to_dict(self) -> dict:
        return {
            "candidates": list(self.candidates),
            "numerical_plateau": self.best,
            "pipeline_area": self.pipeline_area,
            "gap": self.gap,
            "notes": list(self.notes),
        }


def patched_projection_seed(d: Decomposition, config: SolverConfig):
    """Flat-projection seed with the shortest hooks swapped for their routes.

    Each swapped hook gets its own fan disk, welded back along the route.
    Returns None when no swap set gives a simple shadow.
    """
    order = sorted(range(d.n), key=lambda i: float(np.sum(np.linalg.norm(np.diff(d.hooks[i].beta, axis=0), axis=1))))
    for count in range(len(order) + 1):
        swapped = set(order[:count])
        shell = d.assemble(lambda k: "route" if k in swapped else "beta")
        base = flat_projection_disk(JordanCurve(shell), config.refine_levels)
        if base is None:
            continue
        parts = [base] + [initial_disk(JordanCurve(d.hook_curves[k]), config.refine_levels) for k in sorted(swapped)]
        if swapped:
            log.info(f"[COMPARE] shadow simple after swapping hooks {sorted(swapped)}")
        return glue_seed(d, parts, [])
    return None


def _comparison_seed(name: str, curve: JordanCurve, config: SolverConfig, result: PipelineResult, notes: list):
    if name == "fan":
        return initial_disk(curve, config.refine_levels)
    if name == "flat_projection":
        seed = flat_projection_disk(curve, config.refine_levels)
        if seed is None and result is not None and result.decomposition.n:
            seed = patched_projection_seed(result.decomposition, config)
            if seed is not None:
                notes.append("flat_projection: shadow of the full curve not simple, hooks patched in")
        if seed is None:
            notes.append("flat_projection: projection not simple, fan seed used")
            seed = initial_disk(curve, config.refine_levels)
        return seed
    if result is None:
        notes.append(f"{name}: needs a pipeline run")
        return None
    if name == "pipeline":
        if result.seed is None:
            notes.append("pipeline: no glued seed (pipeline stopped early)")
        return result.seed
    if name == "piecewise":
        if result.decomposition.n == 0:
            return initial_disk(curve, config.refine_levels)
        return piecewise_seed(result.decomposition, config)
    raise ValueError(f"unknown seed {name!r}")


def compare_unconstrained(curve: JordanCurve, config: SolverConfig = None, seeds=COMPARISON_SEEDS, result: PipelineResult = None) -> Comparison:
    """Free least-area solves from several seeds; the smallest area is the numerical Plateau solution."""
    config = config or SolverConfig.from_env()
    out = Comparison()
    if result is None and any(s in ("pipeline", "piecewise") for s in seeds):
        result = run_pipeline(curve, config)
    if result is not None and result.sigma is not None:
        out.pipeline_area = result.sigma.area
    for name in seeds:
        seed = _comparison_seed(name, curve, config, result, out.notes)
        if seed is None:
            continue
        seed = seed.copy()
        seed.label = f"free_{name}"
        mesh, stats = minimize_area(seed, config, raise_on_failure=False)
        hits = mesh_self_intersections(mesh)
        out.meshes[name] = mesh
        out.candidates.append({
            "seed": name,
            "area": mesh.area,
            "converged": stats.converged,
            "residual": stats.residual,
            "embedded": hits.empty,
            "intersection_segments": len(hits),
            "intersection_length": hits.total_length(),
            "intersection_curves": len(hits.curves()),
        })
        log.info(f"[COMPARE] {name}: area {mesh.area:.6g}, embedded={hits.empty}")
    if out.candidates:
        out.best = min(out.candidates, key=lambda c: c["area"])["seed"]
    return out


# Convex hull genus

def hook_tips(d: Decomposition, hull: ConvexHull) -> list:
    """Per hook, the interior vertex farthest from the best-fit plane of gamma hat."""
    if d.n == 0:
        return []
    loop = np.vstack(d.gamma_hat)
    centroid, _, _, normal, _ = best_fit_plane(loop)
    out = []
    for i, hook in enumerate(d.hooks):
        pts = hook.interior if len(hook.interior) else hook.beta
        depth = (pts - centroid) @ normal
        k = int(np.argmax(np.abs(depth)))
        out.append({
            "hook": i,
            "tip": pts[k].tolist(),
            "depth": float(depth[k]),
            "on_hull": on_hull(pts[k], hull),
        })
    return out


def dipped_seed(curve: JordanCurve, tip, depth: float, normal, margin: float, refine_levels: int) -> DiskMesh:
    """Fan over the curve with its apex pushed past a hook tip along the plane normal."""
    seed = fan_disk(curve)
    centroid = curve.vertices.mean(axis=0)
    direction = np.sign(depth) * np.asarray(normal, dtype=float)
    reach = (np.asarray(tip) - centroid) @ direction + margin
    seed.vertices[-1] = centroid + reach * direction
    seed.label = "dipped"
    return refine(seed, refine_levels)


def genus_witness(curve: JordanCurve, hull: ConvexHull = None, solves=None, decomposition: Decomposition = None, config: SolverConfig = None) -> dict:
    """Zero-genus witnesses and hook-tip obstructions for the convex hull genus.

    `solves` maps labels to disk meshes. A disk that is embedded and
    inside CH(curve) witnesses genus 0.
    """
    config = config or SolverConfig()
    hull = hull or hull_or_planar(curve.vertices, config.tol_scale)
    candidates = dict(solves or {})
    tips = []
    if decomposition is not None and decomposition.n:
        tips = hook_tips(decomposition, hull)
        deepest = max(tips, key=lambda t: abs(t["depth"]))
        centroid, _, _, normal, _ = best_fit_plane(np.vstack(decomposition.gamma_hat))
        margin = 0.05 * hull.tol.L
        seed = dipped_seed(curve, deepest["tip"], deepest["depth"], normal, margin, config.refine_levels)
        candidates["dipped"] = seed
        if np.all(contains(hull, seed.vertices)):
            region = hull_region(curve.vertices, hull.tol.L * config.barrier_offset, "hull", config.tol_scale)
            try:
                solved, _ = minimize_area_constrained(seed, region, config, raise_on_failure=False)
                candidates["dipped_solved"] = solved
            except ValueError as e:
                log.debug(f"dipped solve skipped: {e}")

    witnesses = []
    checked = {}
    for label, mesh in candidates.items():
        inside = bool(np.all(contains(hull, mesh.vertices)))
        embedded = is_embedded(mesh)
        checked[label] = {"inside_hull": inside, "embedded": embedded, "area": mesh.area}
        if inside and embedded:
            witnesses.append(label)
    obstruction = [t["hook"] for t in tips if t["on_hull"]]
    report = {
        "genus_zero_witness": bool(witnesses),
        "witnesses": witnesses,
        "candidates": checked,
        "tips": tips,
        "tip_obstruction": bool(obstruction),
        "obstructing_hooks": obstruction,
    }
    log.info(f"[GENUS] witness={bool(witnesses)} ({', '.join(witnesses) or 'none'}), obstructing hooks {obstruction}")
    return report
