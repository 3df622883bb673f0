"""Discrete least-area disks by iterated cotangent-Laplace solves."""

import logging
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import factorized

from weakplateau.core.config import SolverConfig, Tolerances
from weakplateau.core.geometry import DiskMesh, area_gradient, triangle_areas
from weakplateau.core.meshing import edge_flip_pass
from weakplateau.core.regions import Region
from weakplateau.errors import NonConvergence

log = logging.getLogger(__name__)

WEIGHT_CAP = 1e6
WEIGHT_FLOOR = 1e-9  # relative regularization keeping the system definite
MIN_BLEND = 1.0 / 1024


@dataclass
class SolveStats:
    iterations: int = 0
    area_trace: list = field(default_factory=list)
    residual: float = float("inf")
    converged: bool = False
    stalled: bool = False
    clamped_weights: int = 0
    flips: int = 0
    backtracks: int = 0
    contact_vertices: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def final_area(self) -> float:
        return self.area_trace[-1] if self.area_trace else float("nan")

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "initial_area": self.area_trace[0] if self.area_trace else None,
            "final_area": self.final_area,
            "residual": self.residual,
            "converged": self.converged,
            "stalled": self.stalled,
            "clamped_weights": self.clamped_weights,
            "flips": self.flips,
            "backtracks": self.backtracks,
            "contact_count": len(self.contact_vertices),
            "seconds": self.seconds,
        }


@dataclass
class CurvatureResidual:
    values: np.ndarray
    max: float
    relative_max: float


def cotan_weights(vertices, triangles):
    """Per-edge cotangent weights 0.5 * (cot a + cot b), clamped to [0, cap].

    Returns (i, j, w, clamped_count).
    """
    v = vertices
    t = triangles
    i_list, j_list, w_list = [], [], []
    for k in range(3):
        a, b, c = t[:, k], t[:, (k + 1) % 3], t[:, (k + 2) % 3]
        u = v[b] - v[a]
        w = v[c] - v[a]
        cross = np.linalg.norm(np.cross(u, w), axis=1)
        cot = np.einsum("ij,ij->i", u, w) / np.maximum(cross, 1e-300)
        # angle at a is opposite edge (b, c)
        i_list.append(np.minimum(b, c))
        j_list.append(np.maximum(b, c))
        w_list.append(0.5 * cot)
    i = np.concatenate(i_list)
    j = np.concatenate(j_list)
    w = np.concatenate(w_list)
    key = i * (len(v) + 1) + j
    uniq, inverse = np.unique(key, return_inverse=True)
    summed = np.bincount(inverse.reshape(-1), weights=w)
    ei = uniq // (len(v) + 1)
    ej = uniq % (len(v) + 1)
    clamped = int(np.sum(summed < 0))
    summed = np.clip(summed, 0.0, WEIGHT_CAP)
    positive = summed[summed > 0]
    floor = WEIGHT_FLOOR * (positive.mean() if len(positive) else 1.0)
    return ei, ej, summed + floor, clamped


def cotan_laplacian(vertices, triangles):
    """Sparse positive semi-definite Laplacian L = D - W and the clamp count."""
    n = len(vertices)
    i, j, w, clamped = cotan_weights(vertices, triangles)
    rows = np.concatenate([i, j, i, j])
    cols = np.concatenate([j, i, i, j])
    vals = np.concatenate([-w, -w, w, w])
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n)), clamped, len(w)


def barycentric_areas(vertices, triangles) -> np.ndarray:
    a = triangle_areas(vertices, triangles) / 3.0
    out = np.zeros(len(vertices))
    for k in range(3):
        np.add.at(out, triangles[:, k], a)
    return out


def mean_curvature_residual(mesh: DiskMesh, exclude=None) -> CurvatureResidual:
    """Per-vertex discrete mean-curvature magnitude |Lx| / A_i.

    `max` is taken over free vertices; `relative_max` is max |Lx_i| / L,
    the area-weighted residual used for convergence.
    """
    grad = area_gradient(mesh.vertices, mesh.triangles)
    areas = barycentric_areas(mesh.vertices, mesh.triangles)
    mag = np.linalg.norm(grad, axis=1)
    values = np.divide(mag, areas, out=np.zeros_like(mag), where=areas > 0)
    free = mesh.interior_mask.copy()
    if exclude is not None:
        free &= ~np.asarray(exclude, dtype=bool)
    if not np.any(free):
        return CurvatureResidual(values, 0.0, 0.0)
    L = Tolerances.for_points(mesh.vertices[mesh.boundary_loop]).L
    return CurvatureResidual(values, float(values[free].max()), float(mag[free].max() / L))


def _laplace_step(vertices, triangles, free):
    """One Pinkall-Polthier step: harmonic map of the current surface."""
    lap, clamped, n_edges = cotan_laplacian(vertices, triangles)
    fi = np.nonzero(free)[0]
    bi = np.nonzero(~free)[0]
    lii = lap[fi][:, fi].tocsc()
    lib = lap[fi][:, bi]
    rhs = -(lib @ vertices[bi])
    solve = factorized(lii)
    out = vertices.copy()
    for k in range(3):
        out[fi, k] = solve(np.ascontiguousarray(rhs[:, k]))
    return out, clamped, n_edges


def _area(vertices, triangles) -> float:
    return float(triangle_areas(vertices, triangles).sum())


def _iterate(mesh: DiskMesh, config: SolverConfig, region: Region = None, max_iterations: int = None):
    mesh = mesh.copy()
    start = time.perf_counter()
    stats = SolveStats()
    free = mesh.interior_mask
    tol = Tolerances.for_points(mesh.vertices[mesh.boundary_loop], config.tol_scale)
    slack = 1e-12 * tol.L ** 2
    contact = np.zeros(len(mesh.vertices), dtype=bool)
    limit = max_iterations or config.max_iterations

    if region is not None:
        region.check_boundary(mesh.vertices[mesh.boundary_loop], tol.surface)
        mesh.vertices, contact = region.initial_projection(mesh.vertices, free)

    area = _area(mesh.vertices, mesh.triangles)
    stats.area_trace.append(area)
    if not np.any(free):
        stats.converged = True
        stats.residual = 0.0
        stats.seconds = time.perf_counter() - start
        return mesh, stats

    for it in range(1, limit + 1):
        old = mesh.vertices
        new, clamped, n_edges = _laplace_step(old, mesh.triangles, free)
        stats.clamped_weights += clamped
        if clamped:
            log.debug(f"iteration {it}: {clamped} negative cotangent weights clamped")

        step_contact = contact
        if region is not None:
            new, step_contact = region.enforce(old, new, free)
        new_area = _area(new, mesh.triangles)

        blend = 1.0
        while new_area > area + slack and blend > MIN_BLEND:
            blend *= 0.5
            stats.backtracks += 1
            cand = old + blend * (new - old)
            if region is not None:
                cand, step_contact = region.enforce(old, cand, free)
            new, new_area = cand, _area(cand, mesh.triangles)
        if new_area > area + slack:
            stats.stalled = True
            new, new_area = old, area

        mesh.vertices = new
        contact = step_contact
        change = abs(area - new_area) / max(area, 1e-300)
        area = new_area
        stats.area_trace.append(area)
        stats.iterations = it

        if clamped > config.flip_threshold * n_edges:
            flips = edge_flip_pass(mesh)
            stats.flips += flips
            if flips:
                area = _area(mesh.vertices, mesh.triangles)
                stats.area_trace[-1] = min(stats.area_trace[-1], area)

        if change < config.area_tol or stats.stalled:
            stats.residual = mean_curvature_residual(mesh, exclude=contact).relative_max
            if stats.residual < config.residual_tol:
                stats.converged = True
                break
            if stats.stalled:
                break

    if not stats.converged:
        stats.residual = mean_curvature_residual(mesh, exclude=contact).relative_max
        stats.converged = stats.residual < config.residual_tol
    stats.contact_vertices = [int(k) for k in np.nonzero(contact & free)[0]]
    stats.seconds = time.perf_counter() - start
    return mesh, stats


def _finish(mesh, stats, config: SolverConfig, label: str, raise_on_failure: bool):
    log.info(
        f"[SOLVE] {label or 'disk'}: area {stats.final_area:.6g} after {stats.iterations} iterations, "
        f"residual {stats.residual:.2e}, contact {len(stats.contact_vertices)}"
    )
    if raise_on_failure and not stats.converged and stats.residual > 10 * config.residual_tol:
        raise NonConvergence(
            f"{label or 'solve'} stopped at residual {stats.residual:.2e} after {stats.iterations} iterations",
            mesh=mesh,
            stats=stats,
        )
    return mesh, stats


def minimize_area(mesh: DiskMesh, config: SolverConfig = None, max_iterations: int = None, raise_on_failure: bool = True):
    """Least-area disk with the mesh's boundary held fixed."""
    config = config or SolverConfig()
    out, stats = _iterate(mesh, config, max_iterations=max_iterations)
    return _finish(out, stats, config, mesh.label, raise_on_failure)


def minimize_area_constrained(
    mesh: DiskMesh,
    region: Region,
    config: SolverConfig = None,
    max_iterations: int = None,
    raise_on_failure: bool = True,
):
    """Least-area disk confined to a region; raises BoundaryOutsideRegion for a bad boundary."""
    config = config or SolverConfig()
    out, stats = _iterate(mesh, config, region=region, max_iterations=max_iterations)
    return _finish(out, stats, config, mesh.label or region.label, raise_on_failure)


def stability_probe(mesh: DiskMesh, amplitude: float = 1e-3, trials: int = 50, seed: int = 0):
    """Random interior perturbations never lower the area beyond relative slack 1e-9.

    Returns (stable, min_delta) where min_delta is the smallest area change seen.
    """
    rng = np.random.default_rng(seed)
    L = Tolerances.for_points(mesh.vertices[mesh.boundary_loop]).L
    base = _area(mesh.vertices, mesh.triangles)
    free = np.nonzero(mesh.interior_mask)[0]
    if len(free) == 0:
        return True, 0.0
    min_delta = np.inf
    for _ in range(int(trials)):
        offsets = rng.normal(size=(len(free), 3))
        offsets /= np.linalg.norm(offsets, axis=1, keepdims=True)
        moved = mesh.vertices.copy()
        moved[free] += amplitude * L * offsets
        min_delta = min(min_delta, _area(moved, mesh.triangles) - base)
    stable = bool(min_delta >= -1e-9 * base)
    log.debug(f"stability probe: min area delta {min_delta:.3e} ({'stable' if stable else 'unstable'})")
    return stable, float(min_delta)
