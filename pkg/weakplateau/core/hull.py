"""Convex hulls, hull membership and shortest paths on the hull surface."""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.spatial import ConvexHull as QhullHull
from scipy.spatial import QhullError

from weakplateau.core.config import Tolerances
from weakplateau.core.geometry import (
    JordanCurve,
    best_fit_plane,
    closest_points_on_triangles,
    unique_edges,
)
from weakplateau.errors import DegenerateHull, PointNotOnHull

log = logging.getLogger(__name__)

MIN_SEGMENT_SAMPLES = 32
MAX_SEGMENT_SAMPLES = 4096


@dataclass(eq=False)
class ConvexHull:
    """Triangulated boundary of a convex hull with outward facets.

    In planar mode the hull is a flat polygon, stored as two coincident
    sheets with opposite normals.
    """

    vertices: np.ndarray
    vertex_ids: np.ndarray
    facets: np.ndarray
    equations: np.ndarray
    tol: Tolerances
    planar: bool = False
    frame: tuple = None
    source_curve_id: str = ""
    on_hull_mask: np.ndarray = field(default=None, repr=False)

    @cached_property
    def edges(self) -> np.ndarray:
        return unique_edges(self.facets)

    @cached_property
    def facet_graph(self) -> nx.Graph:
        """Facets as nodes, joined when they share an edge."""
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.facets)))
        owners = {}
        for f, tri in enumerate(self.facets):
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                owners.setdefault((min(a, b), max(a, b)), []).append(f)
        for faces in owners.values():
            for x in faces[1:]:
                graph.add_edge(faces[0], x)
        return graph

    def signed_distance(self, points) -> np.ndarray:
        """Largest signed plane distance; positive outside."""
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        return (pts @ self.equations[:, :3].T + self.equations[:, 3]).max(axis=1)


def _orient_outward(points, simplices, normals):
    a, b, c = (points[simplices[:, k]] for k in range(3))
    flip = np.einsum("ij,ij->i", np.cross(b - a, c - a), normals) < 0
    out = simplices.copy()
    out[flip] = out[flip][:, [0, 2, 1]]
    return out


def build_hull(points, tol_scale: float = 1.0, source_curve_id: str = "") -> ConvexHull:
    """Convex hull of a 3-D point set; raises DegenerateHull for coplanar input."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 4:
        raise DegenerateHull(f"need at least 4 points, got {len(pts)}")
    tol = Tolerances.for_points(pts, tol_scale)
    centroid, _, _, normal, _ = best_fit_plane(pts)
    if np.abs((pts - centroid) @ normal).max() <= tol.surface:
        raise DegenerateHull("points are coplanar within tolerance")
    try:
        qh = QhullHull(pts, qhull_options="Qt")
    except QhullError as e:
        raise DegenerateHull(f"qhull failed: {e}") from e

    ids = np.sort(qh.vertices)
    remap = -np.ones(len(pts), dtype=np.int64)
    remap[ids] = np.arange(len(ids))
    facets = _orient_outward(pts, qh.simplices, qh.equations[:, :3])
    hull = ConvexHull(
        vertices=pts[ids].copy(),
        vertex_ids=ids,
        facets=remap[facets],
        equations=qh.equations.copy(),
        tol=tol,
        source_curve_id=source_curve_id,
    )
    hull.on_hull_mask = on_hull_many(pts, hull)
    log.debug(f"hull: {len(ids)} vertices, {len(hull.facets)} facets")
    return hull


def build_planar_hull(points, tol_scale: float = 1.0, source_curve_id: str = "") -> ConvexHull:
    """Flat hull in the best-fit plane, as a doubled polygon."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    tol = Tolerances.for_points(pts, tol_scale)
    centroid, u, v, normal, sing = best_fit_plane(pts)
    if len(pts) < 3 or sing[1] <= tol.point * np.sqrt(len(pts)):
        raise DegenerateHull("points are collinear")
    uv = np.column_stack([(pts - centroid) @ u, (pts - centroid) @ v])
    try:
        qh = QhullHull(uv)
    except QhullError as e:
        raise DegenerateHull(f"planar hull failed: {e}") from e

    ring = qh.vertices  # counter-clockwise in (u, v)
    verts = pts[ring] - np.outer((pts[ring] - centroid) @ normal, normal)
    k = len(ring)
    top = np.array([[0, i, i + 1] for i in range(1, k - 1)], dtype=np.int64)
    facets = np.vstack([top, top[:, [0, 2, 1]]])

    offset = -normal @ centroid
    planes = [np.append(normal, offset), np.append(-normal, -offset)]
    for i in range(k):
        a, b = uv[ring[i]], uv[ring[(i + 1) % k]]
        edge = b - a
        # outward normal of a CCW polygon edge
        n2 = np.array([edge[1], -edge[0]]) / np.linalg.norm(edge)
        n3 = n2[0] * u + n2[1] * v
        planes.append(np.append(n3, -n3 @ (centroid + a[0] * u + a[1] * v)))
    hull = ConvexHull(
        vertices=verts,
        vertex_ids=np.asarray(ring, dtype=np.int64),
        facets=facets,
        equations=np.array(planes),
        tol=tol,
        planar=True,
        frame=(centroid, u, v, normal),
        source_curve_id=source_curve_id,
    )
    hull.on_hull_mask = on_hull_many(pts, hull)
    log.debug(f"planar hull: {k} polygon vertices")
    return hull


def hull_or_planar(points, tol_scale: float = 1.0, source_curve_id: str = "") -> ConvexHull:
    try:
        return build_hull(points, tol_scale, source_curve_id)
    except DegenerateHull:
        return build_planar_hull(points, tol_scale, source_curve_id)


def on_hull_many(points, hull: ConvexHull) -> np.ndarray:
    d = hull.signed_distance(points)
    if hull.planar:
        return d <= hull.tol.surface
    return np.abs(d) <= hull.tol.surface


def on_hull(p, hull: ConvexHull) -> bool:
    """True iff p is within tolerance of the hull boundary and not outside."""
    return bool(on_hull_many(p, hull)[0])


def contains(hull: ConvexHull, points, slack: float = None) -> np.ndarray:
    """Inside-or-on test for many points."""
    slack = hull.tol.surface if slack is None else slack
    return hull.signed_distance(points) <= slack


def is_extreme_curve(curve: JordanCurve, tol_scale: float = 1.0) -> bool:
    """Every vertex lies on the boundary of the curve's own hull."""
    hull = hull_or_planar(curve.vertices, tol_scale)
    return bool(np.all(hull.on_hull_mask))


def segment_on_hull(p, q, hull: ConvexHull) -> bool:
    """Sampled test that the straight chord pq stays on the hull boundary."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    length = float(np.linalg.norm(q - p))
    n = int(np.clip(np.ceil(length / max(hull.tol.surface, 1e-300)), MIN_SEGMENT_SAMPLES, MAX_SEGMENT_SAMPLES))
    t = np.linspace(0.0, 1.0, n + 1)
    samples = p + np.outer(t, q - p)
    return bool(np.all(on_hull_many(samples, hull)))


def _facets_containing(point, hull: ConvexHull) -> list:
    v, f = hull.vertices, hull.facets
    cp = closest_points_on_triangles(point, v[f[:, 0]], v[f[:, 1]], v[f[:, 2]])
    d = np.linalg.norm(cp - point, axis=1)
    return [int(k) for k in np.nonzero(d <= hull.tol.surface)[0]]


def _straighten(path, slides, sweeps: int = 30):
    """Slide edge-bound nodes along their edges to shorten the polyline."""
    pts = [np.array(x, dtype=float) for x in path]
    for _ in range(sweeps):
        moved = 0.0
        for k in range(1, len(pts) - 1):
            if slides[k] is None:
                continue
            a, b = slides[k]
            prev, nxt = pts[k - 1], pts[k + 1]

            def cost(s):
                x = a + s * (b - a)
                return np.linalg.norm(x - prev) + np.linalg.norm(nxt - x)

            lo, hi = 0.0, 1.0
            for _ in range(60):
                m1 = lo + (hi - lo) / 3
                m2 = hi - (hi - lo) / 3
                if cost(m1) <= cost(m2):
                    hi = m2
                else:
                    lo = m1
            s = 0.5 * (lo + hi)
            new = a + s * (b - a)
            moved = max(moved, float(np.linalg.norm(new - pts[k])))
            pts[k] = new
        if moved < 1e-14:
            break
    return pts


def surface_shortest_path(hull: ConvexHull, p, q, steiner_per_edge: int = 4, removed_nodes=None) -> np.ndarray:
    """Polyline on the hull boundary approximating the geodesic from p to q.

    Dijkstra runs over hull vertices plus Steiner points on every edge;
    the path is then straightened by sliding its edge points.
    removed_nodes lists graph nodes to exclude (used for rerouting).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for name, x in (("start", p), ("end", q)):
        if not on_hull(x, hull):
            raise PointNotOnHull(f"{name} point {x.tolist()} is not on the hull boundary")
    if hull.planar:
        return np.array([p, q])

    fp = _facets_containing(p, hull)
    fq = _facets_containing(q, hull)
    if set(fp) & set(fq):
        return np.array([p, q])

    v = hull.vertices
    k = int(steiner_per_edge)
    coords = {}
    slides = {}
    for i, x in enumerate(v):
        coords[("v", i)] = x
        slides[("v", i)] = None
    facet_nodes = [[("v", int(a)) for a in tri] for tri in hull.facets]
    edge_nodes = {}
    for a, b in hull.edges:
        a, b = int(a), int(b)
        nodes = []
        for s in range(1, k + 1):
            t = s / (k + 1)
            key = ("e", a, b, s)
            coords[key] = v[a] + t * (v[b] - v[a])
            slides[key] = (v[a], v[b])
            nodes.append(key)
        edge_nodes[(a, b)] = nodes
    for f, tri in enumerate(hull.facets):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            facet_nodes[f].extend(edge_nodes[(int(min(a, b)), int(max(a, b)))])
    coords["p"], coords["q"] = p, q
    slides["p"] = slides["q"] = None
    for f in fp:
        facet_nodes[f].append("p")
    for f in fq:
        facet_nodes[f].append("q")

    removed = set(removed_nodes or ())
    graph = nx.Graph()
    for nodes in facet_nodes:
        nodes = [n for n in nodes if n not in removed]
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                a, b = nodes[i], nodes[j]
                w = float(np.linalg.norm(coords[a] - coords[b]))
                if not graph.has_edge(a, b) or graph[a][b]["weight"] > w:
                    graph.add_edge(a, b, weight=w)
    try:
        route = nx.dijkstra_path(graph, "p", "q", weight="weight")
    except (nx.NetworkXNoPath, nx.NodeNotFound) as e:
        raise PointNotOnHull(f"no surface path between endpoints: {e}") from e

    pts = _straighten([coords[n] for n in route], [slides[n] for n in route])
    pts[0], pts[-1] = p, q
    out = [pts[0]]
    for x in pts[1:]:
        if np.linalg.norm(x - out[-1]) > hull.tol.point:
            out.append(x)
    if not np.array_equal(out[-1], q):
        out[-1] = q
    return np.array(out)


def path_nodes_near(hull: ConvexHull, point, radius: float, steiner_per_edge: int = 4) -> list:
    """Graph node keys of surface_shortest_path within radius of point."""
    v = hull.vertices
    keys = [("v", i) for i in np.nonzero(np.linalg.norm(v - point, axis=1) <= radius)[0]]
    k = int(steiner_per_edge)
    for a, b in hull.edges:
        for s in range(1, k + 1):
            x = v[a] + s / (k + 1) * (v[b] - v[a])
            if np.linalg.norm(x - point) <= radius:
                keys.append(("e", int(a), int(b), s))
    return [(k_[0], int(k_[1])) if k_[0] == "v" else k_ for k_ in keys]
