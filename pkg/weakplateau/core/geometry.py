"""Curve and mesh primitives: polygons, disk meshes, distances, curvature and linking."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from weakplateau.core.config import Tolerances
from weakplateau.errors import CurvesTooClose, NonIntegerResult

log = logging.getLogger(__name__)

MIN_CURVE_VERTICES = 8


@dataclass(frozen=True, eq=False)
class JordanCurve:
    """Closed polygon; vertex k joins vertex k+1 and the last joins the first."""

    vertices: np.ndarray
    closed: bool = True

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=float).reshape(-1, 3))
        if len(v) > 1 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    @property
    def segments(self):
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @property
    def diagonal(self) -> float:
        return Tolerances.for_points(self.vertices).L

    def edge_lengths(self) -> np.ndarray:
        p, q = self.segments
        return np.linalg.norm(q - p, axis=1)

    def transformed(self, rotation=None, scale=1.0, shift=None) -> "JordanCurve":
        v = self.vertices * scale
        if rotation is not None:
            v = v @ np.asarray(rotation).T
        if shift is not None:
            v = v + np.asarray(shift)
        return JordanCurve(v)


@dataclass(eq=False)
class TriMesh:
    """Triangle soup with shared vertices; used for closed surfaces."""

    vertices: np.ndarray
    triangles: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    @property
    def area(self) -> float:
        return float(triangle_areas(self.vertices, self.triangles).sum())

    def edges(self) -> np.ndarray:
        return unique_edges(self.triangles)


@dataclass(eq=False)
class DiskMesh(TriMesh):
    """Disk-type triangulation whose boundary loop is pinned to a curve."""

    boundary_loop: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    interior_mask: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        self.boundary_loop = np.asarray(self.boundary_loop, dtype=np.int64)
        if self.interior_mask is None:
            mask = np.ones(len(self.vertices), dtype=bool)
            mask[self.boundary_loop] = False
            self.interior_mask = mask
        else:
            self.interior_mask = np.asarray(self.interior_mask, dtype=bool)

    @property
    def boundary_curve(self) -> JordanCurve:
        return JordanCurve(self.vertices[self.boundary_loop])

    def copy(self, vertices=None) -> "DiskMesh":
        return DiskMesh(
            vertices=(self.vertices if vertices is None else vertices).copy(),
            triangles=self.triangles.copy(),
            label=self.label,
            boundary_loop=self.boundary_loop.copy(),
            interior_mask=self.interior_mask.copy(),
        )


@dataclass
class ValidationReport:
    valid: bool
    vertex_count: int
    min_segment_length: float
    closed: bool
    simple: bool
    failures: list = field(default_factory=list)
    crossing_pairs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "vertex_count": self.vertex_count,
            "min_segment_length": self.min_segment_length,
            "closed": self.closed,
            "simple": self.simple,
            "failures": list(self.failures),
            "crossing_pairs": [list(map(int, p)) for p in self.crossing_pairs],
        }


# Segment distances

def segment_segment_closest(p1, q1, p2, q2):
    """Closest points between row-aligned segment batches.

    Returns (distance, s, t, c1, c2) with c1 = p1 + s(q1-p1), c2 = p2 + t(q2-p2).
    """
    p1, q1, p2, q2 = (np.asarray(x, dtype=float).reshape(-1, 3) for x in (p1, q1, p2, q2))
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    tiny = 1e-300
    a_safe = np.maximum(a, tiny)
    e_safe = np.maximum(e, tiny)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-14 * a * e, np.clip((b * f - c * e) / np.where(denom > 0, denom, 1.0), 0, 1), 0.0)
        t = (b * s + f) / e_safe
        low = t < 0
        high = t > 1
        s = np.where(low, np.clip(-c / a_safe, 0, 1), np.where(high, np.clip((b - c) / a_safe, 0, 1), s))
        t = np.clip(t, 0, 1)
    point_b = e <= tiny
    s = np.where(point_b, np.clip(-c / a_safe, 0, 1), s)
    t = np.where(point_b, 0.0, t)
    s = np.where(a <= tiny, 0.0, s)
    t = np.where(a <= tiny, np.where(point_b, 0.0, np.clip(f / e_safe, 0, 1)), t)
    c1 = p1 + d1 * s[:, None]
    c2 = p2 + d2 * t[:, None]
    return np.linalg.norm(c1 - c2, axis=1), s, t, c1, c2


def _candidate_segment_pairs(p, q, radius, p2=None, q2=None):
    """Index pairs of segments whose midpoints are within reach of each other."""
    mid = 0.5 * (p + q)
    half = 0.5 * np.linalg.norm(q - p, axis=1)
    if p2 is None:
        reach = 2 * half.max() + radius if len(half) else radius
        pairs = cKDTree(mid).query_pairs(reach, output_type="ndarray")
        return pairs[:, 0], pairs[:, 1]
    mid2 = 0.5 * (p2 + q2)
    half2 = 0.5 * np.linalg.norm(q2 - p2, axis=1)
    reach = half.max() + half2.max() + radius
    hits = cKDTree(mid).query_ball_tree(cKDTree(mid2), reach)
    i = np.repeat(np.arange(len(hits)), [len(h) for h in hits])
    j = np.fromiter((x for h in hits for x in h), dtype=np.int64, count=len(i))
    return i.astype(np.int64), j


def polyline_min_distance(a, b, closed_a=False, closed_b=False) -> float:
    """Smallest distance between two polylines (vertex arrays)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pa, qa = (a, np.roll(a, -1, 0)) if closed_a else (a[:-1], a[1:])
    pb, qb = (b, np.roll(b, -1, 0)) if closed_b else (b[:-1], b[1:])
    if len(pa) == 0 or len(pb) == 0:
        return float(np.min(np.linalg.norm(a[:, None] - b[None], axis=2)))
    best = np.inf
    for start in range(0, len(pa), 512):
        chunk = slice(start, start + 512)
        i = np.repeat(np.arange(len(pa[chunk])), len(pb))
        j = np.tile(np.arange(len(pb)), len(pa[chunk]))
        d = segment_segment_closest(pa[chunk][i], qa[chunk][i], pb[j], qb[j])[0]
        best = min(best, float(d.min()))
    return best


# Curves

def validate_curve(curve: JordanCurve, tol_scale: float = 1.0) -> ValidationReport:
    """Check vertex count, closure, edge lengths and simplicity."""
    v = curve.vertices
    n = len(v)
    tol = Tolerances.for_points(v, tol_scale)
    failures = []
    if n < MIN_CURVE_VERTICES:
        failures.append(f"vertex count {n} below minimum {MIN_CURVE_VERTICES}")
    lengths = curve.edge_lengths() if n >= 2 else np.zeros(0)
    min_len = float(lengths.min()) if len(lengths) else 0.0
    if len(lengths) and min_len <= tol.point:
        failures.append(f"consecutive vertices coincide (min segment {min_len:.3e})")
    closed = bool(curve.closed)
    if not closed:
        failures.append("curve is not closed")

    crossings = []
    if n >= 4:
        p, q = curve.segments
        i, j = _candidate_segment_pairs(p, q, tol.point)
        gap = np.abs(i - j)
        keep = (gap > 1) & (gap < n - 1)
        i, j = i[keep], j[keep]
        if len(i):
            d = segment_segment_closest(p[i], q[i], p[j], q[j])[0]
            bad = d <= tol.point
            crossings = sorted((int(min(a, b)), int(max(a, b))) for a, b in zip(i[bad], j[bad]))
    simple = not crossings
    if not simple:
        failures.append(f"segment intersection between segments {crossings[0]}")

    report = ValidationReport(
        valid=not failures,
        vertex_count=n,
        min_segment_length=min_len,
        closed=closed,
        simple=simple,
        failures=failures,
        crossing_pairs=crossings,
    )
    if failures:
        log.debug(f"curve rejected: {failures}")
    return report


def turning_angles(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    e_out = np.roll(v, -1, axis=0) - v
    e_in = v - np.roll(v, 1, axis=0)
    cross = np.linalg.norm(np.cross(e_in, e_out), axis=1)
    dot = np.einsum("ij,ij->i", e_in, e_out)
    return np.arctan2(cross, dot)


def total_curvature(curve: JordanCurve) -> float:
    """Sum of exterior turning angles at the vertices, in radians."""
    return float(turning_angles(curve.vertices).sum())


def _pair_solid_angles(p1, p2, p3, p4) -> np.ndarray:
    """Signed solid-angle contributions of segment pairs (p1p2, p3p4)."""

    def unit(x):
        n = np.linalg.norm(x, axis=1, keepdims=True)
        return np.divide(x, n, out=np.zeros_like(x), where=n > 0)

    r13, r14, r23, r24 = p3 - p1, p4 - p1, p3 - p2, p4 - p2
    n1 = unit(np.cross(r13, r14))
    n2 = unit(np.cross(r14, r24))
    n3 = unit(np.cross(r24, r23))
    n4 = unit(np.cross(r23, r13))

    def asin_dot(x, y):
        return np.arcsin(np.clip(np.einsum("ij,ij->i", x, y), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    sign = np.sign(np.einsum("ij,ij->i", np.cross(p4 - p3, p2 - p1), r13))
    return omega * sign


def linking_number(a: JordanCurve, b: JordanCurve, tol_scale: float = 1.0) -> int:
    """Gauss linking number by summing exact solid angles over segment pairs."""
    tol = Tolerances.for_points(np.vstack([a.vertices, b.vertices]), tol_scale)
    gap = polyline_min_distance(a.vertices, b.vertices, closed_a=True, closed_b=True)
    if gap <= tol.surface:
        raise CurvesTooClose(f"curves are {gap:.3e} apart (tolerance {tol.surface:.3e})")

    pa, qa = a.segments
    pb, qb = b.segments
    total = 0.0
    for start in range(0, len(pa), 256):
        chunk = slice(start, start + 256)
        i = np.repeat(np.arange(len(pa[chunk])), len(pb))
        j = np.tile(np.arange(len(pb)), len(pa[chunk]))
        total += float(_pair_solid_angles(pa[chunk][i], qa[chunk][i], pb[j], qb[j]).sum())
    value = total / (4.0 * np.pi)
    rounded = int(round(value))
    if abs(value - rounded) >= 0.1:
        raise NonIntegerResult(f"linking sum {value:.4f} is not near an integer")
    return rounded


# Meshes

def triangle_normals(vertices, triangles) -> np.ndarray:
    """Unnormalized normals (twice the triangle area in length)."""
    a, b, c = (vertices[triangles[:, k]] for k in range(3))
    return np.cross(b - a, c - a)


def triangle_areas(vertices, triangles) -> np.ndarray:
    return 0.5 * np.linalg.norm(triangle_normals(vertices, triangles), axis=1)


def mesh_area(mesh: TriMesh) -> float:
    return float(triangle_areas(mesh.vertices, mesh.triangles).sum())


def unique_edges(triangles) -> np.ndarray:
    t = np.asarray(triangles)
    e = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    return np.unique(np.sort(e, axis=1), axis=0)


def edge_face_counts(triangles):
    """Unique undirected edges and how many triangles use each one."""
    t = np.asarray(triangles)
    e = np.sort(np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
    return np.unique(e, axis=0, return_counts=True)


def euler_characteristic(mesh: TriMesh) -> int:
    used = np.unique(mesh.triangles)
    return int(len(used) - len(unique_edges(mesh.triangles)) + len(mesh.triangles))


def is_closed_mesh(mesh: TriMesh) -> bool:
    _, counts = edge_face_counts(mesh.triangles)
    return bool(len(counts)) and bool(np.all(counts == 2))


def boundary_edges(triangles) -> np.ndarray:
    edges, counts = edge_face_counts(triangles)
    return edges[counts == 1]


def area_gradient(vertices, triangles) -> np.ndarray:
    """Exact gradient of total area with respect to every vertex."""
    v = np.asarray(vertices, dtype=float)
    t = np.asarray(triangles)
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    n = np.cross(b - a, c - a)
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    n = np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)
    grad = np.zeros_like(v)
    np.add.at(grad, t[:, 0], 0.5 * np.cross(n, c - b))
    np.add.at(grad, t[:, 1], 0.5 * np.cross(n, a - c))
    np.add.at(grad, t[:, 2], 0.5 * np.cross(n, b - a))
    return grad


def closest_points_on_triangles(p, a, b, c) -> np.ndarray:
    """Closest point on triangle (a, b, c) to p, row-aligned and vectorized."""
    p, a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=float).reshape(-1, 3) for x in (p, a, b, c)))
    ab, ac, ap = b - a, c - a, p - a
    bp, cp = p - b, p - c

    def dot(x, y):
        return np.einsum("ij,ij->i", x, y)

    d1, d2 = dot(ab, ap), dot(ac, ap)
    d3, d4 = dot(ab, bp), dot(ac, bp)
    d5, d6 = dot(ab, cp), dot(ac, cp)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    with np.errstate(divide="ignore", invalid="ignore"):
        v_ab = np.nan_to_num(d1 / (d1 - d3))
        w_ac = np.nan_to_num(d2 / (d2 - d6))
        w_bc = np.nan_to_num((d4 - d3) / ((d4 - d3) + (d5 - d6)))
        denom = va + vb + vc
        denom = np.where(np.abs(denom) > 0, denom, 1.0)
        v_in, w_in = vb / denom, vc / denom

    conds = [
        (d1 <= 0) & (d2 <= 0),
        (d3 >= 0) & (d4 <= d3),
        (vc <= 0) & (d1 >= 0) & (d3 <= 0),
        (d6 >= 0) & (d5 <= d6),
        (vb <= 0) & (d2 >= 0) & (d6 <= 0),
        (va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0),
    ]
    choices = [
        a,
        b,
        a + ab * v_ab[:, None],
        c,
        a + ac * w_ac[:, None],
        b + (c - b) * w_bc[:, None],
    ]
    inside = a + ab * v_in[:, None] + ac * w_in[:, None]
    out = inside.copy()
    for cond, choice in reversed(list(zip(conds, choices))):
        out = np.where(cond[:, None], choice, out)
    return out


def point_mesh_distance(point, mesh: TriMesh):
    """Distance from one point to a mesh, with the closest point and triangle."""
    t = mesh.triangles
    v = mesh.vertices
    cp = closest_points_on_triangles(point, v[t[:, 0]], v[t[:, 1]], v[t[:, 2]])
    d = np.linalg.norm(cp - np.asarray(point, dtype=float), axis=1)
    k = int(np.argmin(d))
    return float(d[k]), cp[k], k


def best_fit_plane(points):
    """Centroid and orthonormal frame (u, v, normal) of the least-squares plane."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    _, s, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    return centroid, vt[0], vt[1], vt[2], s
