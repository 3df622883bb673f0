"""Brute-force references the fast geometry code is checked against."""

import numpy as np
from scipy.spatial.transform import Rotation

# generic view direction so no two crossings project onto each other
VIEW = Rotation.from_euler("xyz", [0.31, 0.57, 0.73]).as_matrix()

RAYS = np.array([
    [0.267, 0.534, 0.802],
    [-0.577, 0.408, 0.707],
    [0.811, -0.342, 0.474],
    [-0.196, -0.883, 0.427],
    [0.123, 0.456, -0.881],
])


def projection_linking_number(a, b) -> int:
    """Linking number from signed crossings where a passes over b in a generic projection."""
    pa = np.asarray(a, dtype=float) @ VIEW.T
    pb = np.asarray(b, dtype=float) @ VIEW.T
    total = 0
    for i in range(len(pa)):
        p1, q1 = pa[i], pa[(i + 1) % len(pa)]
        d1 = q1 - p1
        for j in range(len(pb)):
            p2, q2 = pb[j], pb[(j + 1) % len(pb)]
            d2 = q2 - p2
            den = d1[0] * d2[1] - d1[1] * d2[0]
            if den == 0:
                continue
            r = p2 - p1
            s = (r[0] * d2[1] - r[1] * d2[0]) / den
            t = (r[0] * d1[1] - r[1] * d1[0]) / den
            if not (0 <= s < 1 and 0 <= t < 1):
                continue
            if p1[2] + s * d1[2] > p2[2] + t * d2[2]:
                total += 1 if den > 0 else -1
    return total


def _ray_hits(origin, direction, vertices, triangles) -> int:
    hits = 0
    for tri in triangles:
        a, b, c = vertices[tri]
        e1, e2 = b - a, c - a
        h = np.cross(direction, e2)
        det = e1 @ h
        if abs(det) < 1e-14:
            continue
        s = origin - a
        u = (s @ h) / det
        q = np.cross(s, e1)
        v = (direction @ q) / det
        t = (e2 @ q) / det
        if u >= 0 and v >= 0 and u + v <= 1 and t > 0:
            hits += 1
    return hits


def ray_parity_inside(point, mesh) -> bool:
    """Majority vote of crossing parity over five fixed rays."""
    point = np.asarray(point, dtype=float)
    votes = sum(_ray_hits(point, d / np.linalg.norm(d), mesh.vertices, mesh.triangles) % 2 for d in RAYS)
    return votes >= 3


def _segment_hits_triangle(p, q, a, b, c) -> bool:
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = e1 @ h
    if abs(det) < 1e-14:
        return False
    s = p - a
    u = (s @ h) / det
    qv = np.cross(s, e1)
    v = (d @ qv) / det
    t = (e2 @ qv) / det
    return u >= 0 and v >= 0 and u + v <= 1 and 0 <= t <= 1


def brute_force_self_pairs(mesh) -> list:
    """Every pair of vertex-disjoint triangles whose edges pierce each other."""
    v, t = mesh.vertices, mesh.triangles
    out = []
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if set(t[i]) & set(t[j]):
                continue
            ta, tb = v[t[i]], v[t[j]]
            edges_a = [(ta[k], ta[(k + 1) % 3]) for k in range(3)]
            edges_b = [(tb[k], tb[(k + 1) % 3]) for k in range(3)]
            if any(_segment_hits_triangle(p, q, *tb) for p, q in edges_a) or any(_segment_hits_triangle(p, q, *ta) for p, q in edges_b):
                out.append((i, j))
    return out
