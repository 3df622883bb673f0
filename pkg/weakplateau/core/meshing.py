"""Disk triangulations: fan seeds, subdivision, welding, orientation and edge flips."""

import logging

import networkx as nx
import numpy as np

from weakplateau.core.geometry import (
    DiskMesh,
    JordanCurve,
    TriMesh,
    best_fit_plane,
    edge_face_counts,
    euler_characteristic,
    triangle_areas,
    triangle_normals,
    validate_curve,
)
from weakplateau.core.predicates import orient2d
from weakplateau.errors import NotClosed, WeldFailed

log = logging.getLogger(__name__)


def fan_disk(boundary: JordanCurve) -> DiskMesh:
    """Fan triangulation from the boundary centroid."""
    b = boundary.vertices
    n = len(b)
    verts = np.vstack([b, b.mean(axis=0)])
    tris = np.array([[k, (k + 1) % n, n] for k in range(n)], dtype=np.int64)
    return DiskMesh(verts, tris, boundary_loop=np.arange(n))


def subdivide(mesh: DiskMesh) -> DiskMesh:
    """One round of 1-to-4 subdivision; boundary midpoints stay on their segments."""
    v = mesh.vertices
    t = mesh.triangles
    e = np.sort(np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
    edges, inverse = np.unique(e, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    base = len(v)
    mids = 0.5 * (v[edges[:, 0]] + v[edges[:, 1]])
    m = inverse.reshape(3, -1).T + base  # midpoints of (01, 12, 20) per triangle
    a, b, c = t[:, 0], t[:, 1], t[:, 2]
    m01, m12, m20 = m[:, 0], m[:, 1], m[:, 2]
    tris = np.vstack([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ])

    edge_index = {(int(x), int(y)): k for k, (x, y) in enumerate(edges)}
    loop = []
    bl = mesh.boundary_loop
    for k in range(len(bl)):
        x, y = int(bl[k]), int(bl[(k + 1) % len(bl)])
        loop.append(x)
        loop.append(base + edge_index[(min(x, y), max(x, y))])
    interior = np.concatenate([mesh.interior_mask, np.ones(len(edges), dtype=bool)])
    interior[loop] = False
    return DiskMesh(np.vstack([v, mids]), tris, label=mesh.label, boundary_loop=np.array(loop), interior_mask=interior)


def refine(mesh: DiskMesh, levels: int) -> DiskMesh:
    for _ in range(int(levels)):
        mesh = subdivide(mesh)
    return mesh


def initial_disk(boundary: JordanCurve, refine_levels: int = 3) -> DiskMesh:
    """Fan seed refined refine_levels times."""
    mesh = refine(fan_disk(boundary), refine_levels)
    log.debug(f"initial disk: {len(mesh.triangles)} triangles, {len(mesh.vertices)} vertices")
    return mesh


# Polygon triangulation

def _point_in_triangle_2d(p, a, b, c) -> bool:
    return orient2d(a, b, p) >= 0 and orient2d(b, c, p) >= 0 and orient2d(c, a, p) >= 0


def ear_clip(poly2d) -> np.ndarray:
    """Triangulate a simple counter-clockwise polygon; raises ValueError if stuck."""
    pts = np.asarray(poly2d, dtype=float)
    idx = list(range(len(pts)))
    tris = []
    guard = 0
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            i0, i1, i2 = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if orient2d(a, b, c) <= 0:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if _point_in_triangle_2d(pts[j], a, b, c):
                    blocked = True
                    break
            if blocked:
                continue
            tris.append((i0, i1, i2))
            del idx[k]
            break
        else:
            raise ValueError("no ear found; polygon is not simple")
        guard += 1
        if guard > 4 * len(pts):
            raise ValueError("ear clipping did not terminate")
    tris.append(tuple(idx))
    return np.array(tris, dtype=np.int64)


def flat_projection_disk(boundary: JordanCurve, refine_levels: int = 3):
    """Triangulate the curve's best-fit-plane shadow and lift it.

    Returns None when the projected polygon is not simple.
    """
    b = boundary.vertices
    centroid, u, v, _, _ = best_fit_plane(b)
    uv = np.column_stack([(b - centroid) @ u, (b - centroid) @ v])
    shadow = JordanCurve(np.column_stack([uv, np.zeros(len(uv))]))
    if not validate_curve(shadow).simple:
        log.debug("flat projection is not simple")
        return None
    signed = 0.5 * np.sum(uv[:, 0] * np.roll(uv[:, 1], -1) - np.roll(uv[:, 0], -1) * uv[:, 1])
    order = np.arange(len(b)) if signed > 0 else np.arange(len(b))[::-1]
    try:
        tris = order[ear_clip(uv[order])]
    except ValueError as e:
        log.debug(f"flat projection triangulation failed: {e}")
        return None
    if signed <= 0:
        tris = tris[:, [0, 2, 1]]
    mesh = DiskMesh(b.copy(), tris, boundary_loop=np.arange(len(b)))
    if np.any(triangle_areas(mesh.vertices, mesh.triangles) <= 0):
        return None
    return refine(mesh, refine_levels)


# Welding and orientation

def stack_meshes(meshes, label: str = "") -> TriMesh:
    """Concatenate meshes without merging any vertices."""
    if len(meshes) == 1:
        return meshes[0]
    offsets = np.cumsum([0] + [len(m.vertices) for m in meshes[:-1]])
    return TriMesh(
        np.vstack([m.vertices for m in meshes]),
        np.vstack([m.triangles + o for m, o in zip(meshes, offsets)]),
        label=label,
    )


def weld(meshes, label: str = "") -> TriMesh:
    """Merge meshes, identifying vertices with bit-identical coordinates."""
    stacked = stack_meshes(list(meshes))
    verts, tris = stacked.vertices, stacked.triangles
    used = np.unique(tris)
    uniq, inverse = np.unique(verts[used], axis=0, return_inverse=True)
    remap = np.full(len(verts), -1, dtype=np.int64)
    remap[used] = inverse.reshape(-1)
    tris = remap[tris]
    degenerate = (tris[:, 0] == tris[:, 1]) | (tris[:, 1] == tris[:, 2]) | (tris[:, 0] == tris[:, 2])
    if np.any(degenerate):
        raise WeldFailed(f"{int(degenerate.sum())} triangles collapsed while welding")
    # a shared face means two pieces overlap
    key = np.sort(tris, axis=1)
    _, first = np.unique(key, axis=0, return_index=True)
    if len(first) != len(tris):
        raise WeldFailed(f"{len(tris) - len(first)} duplicate triangles after welding")
    return TriMesh(uniq, tris, label=label)


def orient_consistently(triangles) -> np.ndarray:
    """Flip triangles so neighbours traverse shared edges in opposite directions."""
    t = np.asarray(triangles, dtype=np.int64).copy()
    owners = {}
    for f, tri in enumerate(t):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            owners.setdefault((min(a, b), max(a, b)), []).append(f)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(t)))
    for faces in owners.values():
        if len(faces) == 2:
            graph.add_edge(*faces)

    def directed(tri):
        return {(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])}

    for component in nx.connected_components(graph):
        root = min(component)
        for parent, child in nx.bfs_edges(graph, root):
            if directed(t[parent]) & directed(t[child]):
                t[child] = t[child][[0, 2, 1]]
    return t


def boundary_loops(triangles) -> list:
    """Boundary edges chained into closed loops of vertex indices."""
    t = np.asarray(triangles)
    edges, counts = edge_face_counts(t)
    bnd = {(int(a), int(b)) for a, b in edges[counts == 1]}
    directed = {}
    for tri in t:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            if (min(a, b), max(a, b)) in bnd:
                if int(a) in directed:
                    raise WeldFailed(f"boundary is not a manifold at vertex {int(a)}")
                directed[int(a)] = int(b)
    loops = []
    seen = set()
    for start in sorted(directed):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        nxt = directed[start]
        while nxt != start:
            if nxt in seen or nxt not in directed:
                raise WeldFailed("boundary edges do not close up")
            loop.append(nxt)
            seen.add(nxt)
            nxt = directed[nxt]
        loops.append(loop)
    return loops


def disk_from_triangles(vertices, triangles, curve: JordanCurve, label: str = "") -> DiskMesh:
    """Wrap a welded triangle set as a DiskMesh whose loop starts at curve[0]."""
    v = np.asarray(vertices, dtype=float)
    t = orient_consistently(triangles)
    loops = boundary_loops(t)
    if len(loops) != 1:
        raise WeldFailed(f"expected one boundary loop, found {len(loops)}")
    loop = np.array(loops[0], dtype=np.int64)
    start = np.nonzero(np.all(v[loop] == curve.vertices[0], axis=1))[0]
    if len(start) != 1:
        raise WeldFailed("curve start vertex is not on the glued boundary")
    loop = np.roll(loop, -int(start[0]))
    # traverse in the curve's direction
    forward = _loop_follows_curve(v, loop, curve)
    if not forward:
        loop = np.concatenate([loop[:1], loop[1:][::-1]])
        t = t[:, [0, 2, 1]]
    mesh = DiskMesh(v, t, label=label, boundary_loop=loop)
    chi = euler_characteristic(mesh)
    if chi != 1:
        raise WeldFailed(f"glued surface has Euler characteristic {chi}, not a disk")
    return mesh


def _loop_follows_curve(v, loop, curve: JordanCurve) -> bool:
    """Whether the loop meets curve vertex 1 before the last curve vertex."""
    pos = {tuple(v[idx]): k for k, idx in enumerate(loop)}
    k1 = pos.get(tuple(curve.vertices[1]))
    k_last = pos.get(tuple(curve.vertices[-1]))
    if k1 is None or k_last is None:
        raise WeldFailed("curve vertices are missing from the glued boundary")
    return k1 < k_last


def check_closed(mesh: TriMesh):
    edges, counts = edge_face_counts(mesh.triangles)
    bad = int(np.sum(counts != 2))
    if bad:
        raise NotClosed(f"{mesh.label or 'surface'}: {bad} edges not shared by exactly two triangles")


# Edge flips

def edge_flip_pass(mesh: DiskMesh, max_passes: int = 5, area_safe: bool = True) -> int:
    """Delaunay flips on interior edges, in place. Returns the flip count.

    With area_safe, a flip that would enlarge the surface is skipped.
    """
    v = mesh.vertices
    t = mesh.triangles
    total = 0
    for _ in range(max_passes):
        flips = 0
        owners = {}
        for f, tri in enumerate(t):
            for k in range(3):
                a, b = int(tri[k]), int(tri[(k + 1) % 3])
                owners.setdefault((min(a, b), max(a, b)), []).append((f, int(tri[(k + 2) % 3])))
        touched = set()
        existing = set(owners)
        for (a, b), pair in owners.items():
            if len(pair) != 2:
                continue
            (f1, c), (f2, d) = pair
            if f1 in touched or f2 in touched:
                continue
            if (min(c, d), max(c, d)) in existing:
                continue
            ang_c = _angle(v[c], v[a], v[b])
            ang_d = _angle(v[d], v[a], v[b])
            if ang_c + ang_d <= np.pi + 1e-12:
                continue
            # keep orientation: f1 is (a, b, c) in some rotation
            tri1 = list(t[f1])
            i = tri1.index(c)
            x, y = tri1[(i + 1) % 3], tri1[(i + 2) % 3]  # c -> x -> y
            new1 = np.array([c, x, d])
            new2 = np.array([d, y, c])
            n_old = triangle_normals(v, t[[f1, f2]]).sum(axis=0)
            n_new = triangle_normals(v, np.array([new1, new2]))
            if np.any(n_new @ n_old <= 0):
                continue
            if area_safe and np.linalg.norm(n_new, axis=1).sum() > np.linalg.norm(triangle_normals(v, t[[f1, f2]]), axis=1).sum():
                continue
            t[f1], t[f2] = new1, new2
            existing.add((min(c, d), max(c, d)))
            touched.update((f1, f2))
            flips += 1
        total += flips
        if not flips:
            break
    if total:
        log.debug(f"edge flips: {total}")
    return total


def _angle(apex, p, q) -> float:
    a = p - apex
    b = q - apex
    return float(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b))
