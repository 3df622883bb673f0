"""Triangle-triangle, segment-mesh and point-in-surface tests."""

import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from weakplateau.core.config import Tolerances
from weakplateau.core.geometry import (
    TriMesh,
    point_mesh_distance,
    segment_segment_closest,
    triangle_normals,
)
from weakplateau.core.predicates import _orient3d_exact, orient3d_filter, perturbed_sign
from weakplateau.errors import OnSurface

log = logging.getLogger(__name__)


@dataclass
class IntersectionSet:
    """Intersection segments with the triangle pairs that produced them."""

    segments: list = field(default_factory=list)
    involved_triangle_pairs: list = field(default_factory=list)

    def __len__(self):
        return len(self.segments)

    @property
    def empty(self) -> bool:
        return not self.segments

    def total_length(self) -> float:
        return float(sum(np.linalg.norm(q - p) for p, q in self.segments))

    def points(self) -> np.ndarray:
        if not self.segments:
            return np.zeros((0, 3))
        return np.array([0.5 * (p + q) for p, q in self.segments])

    def curves(self, tol: float = None) -> list:
        """Chain segments into connected intersection curves (lists of segment indices)."""
        if not self.segments:
            return []
        ends = np.array([pt for seg in self.segments for pt in seg])
        if tol is None:
            tol = 1e-9 * Tolerances.for_points(ends).L
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.segments)))
        for a, b in cKDTree(ends).query_pairs(max(tol, 1e-300)):
            if a // 2 != b // 2:
                graph.add_edge(a // 2, b // 2)
        return [sorted(c) for c in sorted(nx.connected_components(graph), key=min)]

    def to_dict(self) -> dict:
        return {
            "count": len(self.segments),
            "curves": len(self.curves()),
            "total_length": self.total_length(),
            "triangle_pairs": [list(map(int, p)) for p in self.involved_triangle_pairs],
            "segments": [[p.tolist(), q.tolist()] for p, q in self.segments],
        }


# Broad phase

def _triangle_boxes(vertices, triangles):
    tri = vertices[triangles]
    return tri.min(axis=1), tri.max(axis=1)


def _candidate_pairs(va, ta, vb=None, tb=None, pad=0.0):
    """Triangle pairs whose bounding boxes overlap (within pad)."""
    lo_a, hi_a = _triangle_boxes(va, ta)
    ca = 0.5 * (lo_a + hi_a)
    ra = 0.5 * np.linalg.norm(hi_a - lo_a, axis=1)
    if vb is None:
        pairs = cKDTree(ca).query_pairs(2 * ra.max() + pad, output_type="ndarray")
        i, j = pairs[:, 0], pairs[:, 1]
        lo_b, hi_b = lo_a, hi_a
    else:
        lo_b, hi_b = _triangle_boxes(vb, tb)
        cb = 0.5 * (lo_b + hi_b)
        rb = 0.5 * np.linalg.norm(hi_b - lo_b, axis=1)
        hits = cKDTree(ca).query_ball_tree(cKDTree(cb), ra.max() + rb.max() + pad)
        i = np.repeat(np.arange(len(hits)), [len(h) for h in hits]).astype(np.int64)
        j = np.fromiter((x for h in hits for x in h), dtype=np.int64, count=len(i))
    overlap = np.all((lo_a[i] <= hi_b[j] + pad) & (lo_b[j] <= hi_a[i] + pad), axis=1)
    return i[overlap], j[overlap]


# Narrow phase

def _plane_signs(p0, p1, p2, q):
    """Signs of q against plane (p0, p1, p2); exact zero counts as positive.

    Also returns a mask of rows where all three q lie exactly in the plane.
    """
    signs = np.empty((len(q[0]), 3), dtype=int)
    certain = np.empty((len(q[0]), 3), dtype=bool)
    for k in range(3):
        signs[:, k], certain[:, k] = orient3d_filter(p0, p1, p2, q[k])
    rows, cols = np.nonzero(~certain)
    for r, c in zip(rows, cols):
        signs[r, c] = _orient3d_exact(p0[r], p1[r], p2[r], q[c][r])
    coplanar = np.all(signs == 0, axis=1)
    return perturbed_sign(signs), coplanar


def _cut_points(tri, dist, sign):
    """Points where the edges of tri cross a plane given signed distances."""
    pts = []
    for a, b in ((0, 1), (1, 2), (2, 0)):
        if sign[a] != sign[b]:
            da, db = dist[a], dist[b]
            t = da / (da - db) if da != db else 0.0
            pts.append(tri[a] + t * (tri[b] - tri[a]))
    return pts


def triangle_pair_segment(t1, t2, s2_vs_1=None, s1_vs_2=None):
    """Intersection segment of two non-coplanar triangles, or None."""
    n1 = np.cross(t1[1] - t1[0], t1[2] - t1[0])
    n2 = np.cross(t2[1] - t2[0], t2[2] - t2[0])
    d2 = (t2 - t1[0]) @ n1
    d1 = (t1 - t2[0]) @ n2
    if s2_vs_1 is None:
        s2_vs_1 = perturbed_sign(d2)
    if s1_vs_2 is None:
        s1_vs_2 = perturbed_sign(d1)
    if abs(s2_vs_1.sum()) == 3 or abs(s1_vs_2.sum()) == 3:
        return None
    direction = np.cross(n1, n2)
    if not np.any(direction):
        return None
    c1 = _cut_points(t1, d1, s1_vs_2)
    c2 = _cut_points(t2, d2, s2_vs_1)
    if len(c1) < 2 or len(c2) < 2:
        return None
    a = sorted(c1[:2], key=lambda p: p @ direction)
    b = sorted(c2[:2], key=lambda p: p @ direction)
    lo = a[0] if a[0] @ direction >= b[0] @ direction else b[0]
    hi = a[1] if a[1] @ direction <= b[1] @ direction else b[1]
    if lo @ direction >= hi @ direction:
        return None
    return lo, hi


def _pairs_to_set(va, ta, vb, tb, i, j, keep_segment=None, label="") -> IntersectionSet:
    if len(i) == 0:
        return IntersectionSet()
    p = [va[ta[i, k]] for k in range(3)]
    q = [vb[tb[j, k]] for k in range(3)]
    s_q, cop_q = _plane_signs(p[0], p[1], p[2], q)
    straddle_q = np.abs(s_q.sum(axis=1)) < 3
    rows = np.nonzero(straddle_q & ~cop_q)[0]
    coplanar = int(cop_q.sum())
    if coplanar:
        log.debug(f"{label}: {coplanar} coplanar triangle pairs treated as disjoint")
    if len(rows) == 0:
        return IntersectionSet()
    p_r = [x[rows] for x in p]
    q_r = [x[rows] for x in q]
    s_p, cop_p = _plane_signs(q_r[0], q_r[1], q_r[2], p_r)
    straddle_p = np.abs(s_p.sum(axis=1)) < 3

    found = []
    for k in np.nonzero(straddle_p & ~cop_p)[0]:
        r = rows[k]
        t1 = np.array([p[0][r], p[1][r], p[2][r]])
        t2 = np.array([q[0][r], q[1][r], q[2][r]])
        seg = triangle_pair_segment(t1, t2, s_q[r], s_p[k])
        if seg is None:
            continue
        if keep_segment is not None and not keep_segment(int(i[r]), int(j[r]), seg):
            continue
        found.append(((int(i[r]), int(j[r])), seg))
    found.sort(key=lambda x: x[0])
    return IntersectionSet(
        segments=[seg for _, seg in found],
        involved_triangle_pairs=[pair for pair, _ in found],
    )


def mesh_self_intersections(mesh: TriMesh) -> IntersectionSet:
    """Intersections between triangle pairs that share no vertex."""
    v, t = mesh.vertices, mesh.triangles
    i, j = _candidate_pairs(v, t)
    shared = np.zeros(len(i), dtype=bool)
    for a in range(3):
        for b in range(3):
            shared |= t[i, a] == t[j, b]
    i, j = i[~shared], j[~shared]
    swap = i > j
    i, j = np.where(swap, j, i), np.where(swap, i, j)
    result = _pairs_to_set(v, t, v, t, i, j, label=mesh.label or "self")
    if not result.empty:
        log.debug(f"{mesh.label or 'mesh'}: {len(result)} self-intersection segments")
    return result


def _near_any(point, anchors, tol) -> bool:
    return bool(len(anchors)) and float(np.min(np.linalg.norm(anchors - point, axis=1))) <= tol


def _on_shared_edge(point, shared, tol) -> bool:
    if len(shared) < 2:
        return False
    n = len(shared)
    a = np.repeat(shared, n, axis=0)
    b = np.tile(shared, (n, 1))
    keep = np.any(a != b, axis=1)
    if not np.any(keep):
        return False
    d = segment_segment_closest(a[keep], b[keep], np.repeat(point[None], keep.sum(), 0), np.repeat(point[None], keep.sum(), 0))[0]
    return float(d.min()) <= tol


def mesh_mesh_intersections(a: TriMesh, b: TriMesh, tol_scale: float = 1.0) -> IntersectionSet:
    """Intersections across two meshes, ignoring contact at coincident vertices."""
    tol = Tolerances.for_points(np.vstack([a.vertices, b.vertices]), tol_scale)
    i, j = _candidate_pairs(a.vertices, a.triangles, b.vertices, b.triangles)

    # coincident-coordinate vertices shared by both meshes
    b_keys = {tuple(x) for x in b.vertices}
    a_shared = np.array([tuple(x) in b_keys for x in a.vertices], dtype=bool)

    def keep(ti, tj, seg):
        tri_a = a.triangles[ti]
        if not a_shared[tri_a].any():
            return True
        tri_b_keys = {tuple(x) for x in b.vertices[b.triangles[tj]]}
        common = np.array([a.vertices[k] for k in tri_a if tuple(a.vertices[k]) in tri_b_keys])
        if len(common) == 0:
            return True
        lo, hi = seg
        if np.linalg.norm(hi - lo) <= tol.surface:
            return False
        on_lo = _near_any(lo, common, tol.surface) or _on_shared_edge(lo, common, tol.surface)
        on_hi = _near_any(hi, common, tol.surface) or _on_shared_edge(hi, common, tol.surface)
        return not (on_lo and on_hi)

    return _pairs_to_set(a.vertices, a.triangles, b.vertices, b.triangles, i, j, keep, label=f"{a.label}|{b.label}")


def segment_mesh_intersect(p, q, mesh: TriMesh, eps: float = 1e-12):
    """Transversal crossings of segment pq with mesh triangles.

    Returns a list of (point, triangle_index), ordered along pq, with
    duplicate hits on shared edges merged.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v, t = mesh.vertices, mesh.triangles
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    tmin, tmax = _triangle_boxes(v, t)
    cand = np.nonzero(np.all((tmin <= hi) & (tmax >= lo), axis=1))[0]
    if len(cand) == 0:
        return []
    a, b, c = v[t[cand, 0]], v[t[cand, 1]], v[t[cand, 2]]
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, h)
    scale = np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1) * np.linalg.norm(d)
    ok = np.abs(det) > eps * np.maximum(scale, 1e-300)
    det_safe = np.where(ok, det, 1.0)
    s = p - a
    u = np.einsum("ij,ij->i", s, h) / det_safe
    qv = np.cross(s, e1)
    w = (qv @ d) / det_safe
    tt = np.einsum("ij,ij->i", e2, qv) / det_safe
    hit = ok & (u >= 0) & (w >= 0) & (u + w <= 1) & (tt >= 0) & (tt <= 1)
    order = np.argsort(tt[hit], kind="stable")
    params = tt[hit][order]
    idx = cand[hit][order]
    merge = 1e-9
    out = []
    last = None
    for s_, k in zip(params, idx):
        if last is not None and s_ - last <= merge:
            continue
        out.append((p + s_ * d, int(k)))
        last = s_
    return out


def generalized_winding_number(points, mesh: TriMesh) -> np.ndarray:
    """Sum of signed triangle solid angles over 4 pi, per query point."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    v, t = mesh.vertices, mesh.triangles
    out = np.empty(len(pts))
    for n, x in enumerate(pts):
        a = v[t[:, 0]] - x
        b = v[t[:, 1]] - x
        c = v[t[:, 2]] - x
        la, lb, lc = (np.linalg.norm(y, axis=1) for y in (a, b, c))
        num = np.einsum("ij,ij->i", a, np.cross(b, c))
        den = (
            la * lb * lc
            + np.einsum("ij,ij->i", a, b) * lc
            + np.einsum("ij,ij->i", b, c) * la
            + np.einsum("ij,ij->i", c, a) * lb
        )
        out[n] = 2.0 * np.arctan2(num, den).sum() / (4.0 * np.pi)
    return out


def winding_side(p, closed_mesh: TriMesh, tol_scale: float = 1.0) -> str:
    """'inside' or 'outside' of a closed, outward-oriented surface."""
    tol = Tolerances.for_points(closed_mesh.vertices, tol_scale)
    dist, _, _ = point_mesh_distance(p, closed_mesh)
    if dist <= tol.surface:
        raise OnSurface(f"point lies {dist:.3e} from the surface")
    w = float(generalized_winding_number(p, closed_mesh)[0])
    return "inside" if abs(w - 1.0) < 0.5 else "outside"


def mesh_volume(mesh: TriMesh) -> float:
    """Signed enclosed volume; positive for outward orientation."""
    v, t = mesh.vertices, mesh.triangles
    return float(np.einsum("ij,ij->i", v[t[:, 0]], triangle_normals(v, t)).sum() / 6.0)
