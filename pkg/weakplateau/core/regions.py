"""Feasible regions for constrained solves: hull bounds plus one-sided barriers."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from weakplateau.core.geometry import TriMesh, closest_points_on_triangles, triangle_normals
from weakplateau.core.hull import ConvexHull, hull_or_planar
from weakplateau.core.intersections import generalized_winding_number
from weakplateau.errors import BoundaryOutsideRegion, CarveFailed

log = logging.getLogger(__name__)

_BLOCK = 64


@dataclass(eq=False)
class Barrier:
    """A surface the solve may not cross.

    Closed barriers are outward oriented; `keep_inside` picks the feasible side.
    Open barriers use crossing parity from `reference`, which is feasible.
    """

    mesh: TriMesh
    reference: np.ndarray = None
    keep_inside: bool = True

    def __post_init__(self):
        if self.reference is not None:
            self.reference = np.asarray(self.reference, dtype=float)
        v, t = self.mesh.vertices, self.mesh.triangles
        self._a = v[t[:, 0]]
        self._b = v[t[:, 1]]
        self._c = v[t[:, 2]]
        n = triangle_normals(v, t)
        norm = np.linalg.norm(n, axis=1, keepdims=True)
        self._n = np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)
        tri = v[t]
        self._centers = tri.mean(axis=1)
        self._radius = float(np.linalg.norm(tri - self._centers[:, None], axis=2).max()) if len(t) else 0.0
        self._tree = cKDTree(self._centers)

    @property
    def closed(self) -> bool:
        return self.reference is None

    # side classification

    def feasible(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if self.closed:
            w = np.concatenate([generalized_winding_number(pts[i:i + 512], self.mesh) for i in range(0, len(pts), 512)]) if len(pts) else np.zeros(0)
            inside = np.abs(w - 1.0) < 0.5
            return inside if self.keep_inside else ~inside
        return crossing_parity(self.reference, pts, self.mesh) == 0

    # proximity

    def closest(self, points, radius: float):
        """Closest barrier point and its triangle for points within radius.

        Returns (dist, point, triangle) with dist = inf where nothing is near.
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        dist = np.full(len(pts), np.inf)
        cp = np.zeros_like(pts)
        tri = np.full(len(pts), -1, dtype=np.int64)
        if len(pts) == 0:
            return dist, cp, tri
        # the closest triangle has its centre within d0 + 2 * radius
        d0, _ = self._tree.query(pts)
        reach = np.minimum(radius, d0 + self._radius) + self._radius
        hits = self._tree.query_ball_point(pts, reach)
        counts = np.array([len(h) for h in hits])
        if counts.sum() == 0:
            return dist, cp, tri
        rows = np.repeat(np.arange(len(pts)), counts)
        cols = np.fromiter((x for h in hits for x in h), dtype=np.int64, count=int(counts.sum()))
        close = closest_points_on_triangles(pts[rows], self._a[cols], self._b[cols], self._c[cols])
        d = np.linalg.norm(close - pts[rows], axis=1)
        order = np.lexsort((d, rows))
        rows, cols, d, close = rows[order], cols[order], d[order], close[order]
        first = np.ones(len(rows), dtype=bool)
        first[1:] = rows[1:] != rows[:-1]
        r = rows[first]
        dist[r] = d[first]
        cp[r] = close[first]
        tri[r] = cols[first]
        keep = dist <= radius
        dist[~keep] = np.inf
        return dist, cp, tri

    def crossings(self, p, q):
        """Odd-crossing mask and first crossing parameter for segments p -> q."""
        p = np.asarray(p, dtype=float).reshape(-1, 3)
        q = np.asarray(q, dtype=float).reshape(-1, 3)
        odd = np.zeros(len(p), dtype=bool)
        first = np.full(len(p), np.inf)
        if len(p) == 0:
            return odd, first
        mid = 0.5 * (p + q)
        half = 0.5 * np.linalg.norm(q - p, axis=1)
        moving = np.nonzero(half > 0)[0]
        if len(moving) == 0:
            return odd, first
        hits = self._tree.query_ball_point(mid[moving], half[moving] + self._radius)
        counts = np.array([len(h) for h in hits])
        if counts.sum() == 0:
            return odd, first
        rows = np.repeat(moving, counts)
        cols = np.fromiter((x for h in hits for x in h), dtype=np.int64, count=int(counts.sum()))
        t, hit = _segment_triangle(p[rows], q[rows], self._a[cols], self._b[cols], self._c[cols])
        n_hits = np.bincount(rows[hit], minlength=len(p))
        odd = n_hits % 2 == 1
        np.minimum.at(first, rows[hit], t[hit])
        return odd, first

    def normal(self, tri) -> np.ndarray:
        return self._n[tri]


def _segment_triangle(p, q, a, b, c, eps: float = 1e-14):
    """Row-aligned Moller-Trumbore: crossing parameter along pq and hit mask."""
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, h)
    ok = np.abs(det) > eps * np.maximum(np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1) * np.linalg.norm(d, axis=1), 1e-300)
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    s = p - a
    u = np.einsum("ij,ij->i", s, h) * inv
    qv = np.cross(s, e1)
    v = np.einsum("ij,ij->i", d, qv) * inv
    t = np.einsum("ij,ij->i", e2, qv) * inv
    hit = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t >= 0) & (t <= 1)
    return t, hit


def crossing_parity(reference, points, mesh: TriMesh) -> np.ndarray:
    """Parity of crossings of segments reference -> point with the mesh."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    ref = np.asarray(reference, dtype=float)
    v, t = mesh.vertices, mesh.triangles
    count = np.zeros(len(pts), dtype=np.int64)
    p = np.broadcast_to(ref, pts.shape)
    for start in range(0, len(t), _BLOCK):
        block = t[start:start + _BLOCK]
        k = len(block)
        a = np.repeat(v[block[:, 0]], len(pts), axis=0)
        b = np.repeat(v[block[:, 1]], len(pts), axis=0)
        c = np.repeat(v[block[:, 2]], len(pts), axis=0)
        _, hit = _segment_triangle(np.tile(p, (k, 1)), np.tile(pts, (k, 1)), a, b, c)
        count += hit.reshape(k, len(pts)).sum(axis=0)
    return count % 2


@dataclass(eq=False)
class Region:
    """Intersection of an optional convex hull with barrier constraints."""

    label: str = ""
    hull: ConvexHull = None
    barriers: list = field(default_factory=list)
    delta: float = 0.0

    @property
    def boundary_mesh(self):
        closed = [b.mesh for b in self.barriers if b.closed]
        return closed[0] if closed else None

    def feasible(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        ok = np.ones(len(pts), dtype=bool)
        if self.hull is not None:
            ok &= self.hull.signed_distance(pts) <= self.hull.tol.surface
        for barrier in self.barriers:
            ok &= barrier.feasible(pts)
        return ok

    def check_boundary(self, points, tol: float):
        """Raise BoundaryOutsideRegion unless every point is feasible or on the region wall."""
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if self.hull is not None:
            out = self.hull.signed_distance(pts) > max(tol, self.hull.tol.surface)
            if np.any(out):
                raise BoundaryOutsideRegion(f"{int(out.sum())} boundary points outside the hull of region {self.label!r}")
        for barrier in self.barriers:
            dist, _, _ = barrier.closest(pts, tol)
            off = np.isinf(dist)
            if np.any(off):
                bad = ~barrier.feasible(pts[off])
                if np.any(bad):
                    raise BoundaryOutsideRegion(f"{int(bad.sum())} boundary points on the wrong side of a wall of region {self.label!r}")

    def _hull_project(self, x):
        if self.hull is None:
            return x
        h = self.hull
        out = x.copy()
        if h.planar:
            centroid, _, _, normal = h.frame
            out = out - np.outer((out - centroid) @ normal, normal)
            edge_eq = h.equations[2:]
            for _ in range(4):
                d = out @ edge_eq[:, :3].T + edge_eq[:, 3]
                k = d.argmax(axis=1)
                worst = d[np.arange(len(out)), k]
                bad = worst > 0
                if not np.any(bad):
                    break
                out[bad] -= worst[bad, None] * edge_eq[k[bad], :3]
            return out
        eq = h.equations
        for _ in range(8):
            d = out @ eq[:, :3].T + eq[:, 3]
            k = d.argmax(axis=1)
            worst = d[np.arange(len(out)), k]
            bad = worst > 0
            if not np.any(bad):
                break
            out[bad] -= (worst[bad] + self.delta)[:, None] * eq[k[bad], :3]
        return out

    def _push_off(self, barrier: Barrier, old, x, idx):
        """Move x[idx] to distance delta from the barrier on old's side."""
        dist, cp, tri = barrier.closest(x[idx], np.inf)
        n = barrier.normal(tri)
        if barrier.closed:
            sign = np.full(len(idx), -1.0 if barrier.keep_inside else 1.0)
        else:
            sign = np.sign(np.einsum("ij,ij->i", old[idx] - cp, n))
            sign[sign == 0] = 1.0
        return cp + (sign * self.delta)[:, None] * n

    def enforce(self, old, new, free):
        """Project free vertices of `new` back into the region.

        `old` positions are feasible. Returns (positions, contact mask).
        """
        x = new.copy()
        contact = np.zeros(len(x), dtype=bool)
        idx_free = np.nonzero(free)[0]
        moved = self._hull_project(x[idx_free])
        changed = np.any(moved != x[idx_free], axis=1)
        contact[idx_free[changed]] = True
        x[idx_free] = moved

        for barrier in self.barriers:
            odd, first = barrier.crossings(old[idx_free], x[idx_free])
            if np.any(odd):
                bad = idx_free[odd]
                cand = self._push_off(barrier, old, x, bad)
                still, t_cross = barrier.crossings(old[bad], cand)
                if np.any(still):
                    # stop just short of the first crossing
                    seg = x[bad[still]] - old[bad[still]]
                    length = np.maximum(np.linalg.norm(seg, axis=1), 1e-300)
                    t = np.clip(first[odd][still] - self.delta / length, 0.0, 1.0)
                    cand[still] = old[bad[still]] + t[:, None] * seg
                x[bad] = cand
                contact[bad] = True
            dist, _, _ = barrier.closest(x[idx_free], self.delta)
            near = np.isfinite(dist) & (dist < 0.5 * self.delta)
            if np.any(near):
                sel = idx_free[near]
                cand = self._push_off(barrier, old, x, sel)
                back, _ = barrier.crossings(old[sel], cand)
                cand[back] = x[sel][back]
                x[sel] = cand
                contact[sel] = True
        return x, contact

    def initial_projection(self, x, free):
        """Bring an arbitrary seed inside: classify, then push violators to the walls."""
        x = x.copy()
        contact = np.zeros(len(x), dtype=bool)
        idx = np.nonzero(free)[0]
        moved = self._hull_project(x[idx])
        contact[idx[np.any(moved != x[idx], axis=1)]] = True
        x[idx] = moved
        for barrier in self.barriers:
            bad = idx[~barrier.feasible(x[idx])]
            if len(bad) == 0:
                continue
            dist, cp, tri = barrier.closest(x[bad], np.inf)
            n = barrier.normal(tri)
            if barrier.closed:
                sign = np.full(len(bad), -1.0 if barrier.keep_inside else 1.0)
                x[bad] = cp + (sign * self.delta)[:, None] * n
            else:
                plus = cp + self.delta * n
                ok_plus = barrier.feasible(plus)
                x[bad] = np.where(ok_plus[:, None], plus, cp - self.delta * n)
            contact[bad] = True
            log.debug(f"{self.label}: {len(bad)} seed vertices pulled inside")
        return x, contact


def hull_region(points, delta: float, label: str = "hull", tol_scale: float = 1.0) -> Region:
    return Region(label=label, hull=hull_or_planar(points, tol_scale), delta=delta)


def closed_region(mesh: TriMesh, delta: float, label: str = "", hull: ConvexHull = None) -> Region:
    """Region inside a closed, outward-oriented surface."""
    return Region(label=label or mesh.label, hull=hull, barriers=[Barrier(mesh)], delta=delta)


def side_region(hull: ConvexHull, wall: TriMesh, reference, delta: float, label: str) -> Region:
    """The part of the hull on reference's side of an open wall."""
    return Region(label=label, hull=hull, barriers=[Barrier(wall, reference=reference)], delta=delta)


def carve_region(curve_points, wall: TriMesh, samples, delta: float, label: str, tol_scale: float = 1.0) -> Region:
    """Component of CH(curve) minus the wall that contains the sample points.

    Raises CarveFailed if the wall puts the samples on different sides.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1, 3)
    hull = hull_or_planar(curve_points, tol_scale)
    ref = samples[0]
    parity = crossing_parity(ref, samples, wall)
    if np.any(parity != 0):
        raise CarveFailed(f"{label}: wall separates the carve samples ({int(parity.sum())} of {len(samples)})")
    return side_region(hull, wall, ref, delta, label)
