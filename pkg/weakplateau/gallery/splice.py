"""Splicing thin fingers into existing curves: thin hooks and thin tails."""

import logging

import numpy as np

from weakplateau.core.geometry import JordanCurve, validate_curve
from weakplateau.errors import SpliceSelfIntersect
from weakplateau.gallery.families import line, fig6_config, weak_extreme_rw

log = logging.getLogger(__name__)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("direction must be non-zero")
    return v / norm


def attach_index(curve: JordanCurve, attach_param: float) -> int:
    return int(round(float(attach_param) * len(curve))) % len(curve)


def nearest_param(curve: JordanCurve, point) -> float:
    """attach_param selecting the vertex closest to `point`."""
    k = int(np.argmin(np.linalg.norm(curve.vertices - np.asarray(point, dtype=float), axis=1)))
    return k / len(curve)


def splice_finger(curve: JordanCurve, index: int, direction, length: float, width: float, kind: str) -> JordanCurve:
    """Insert a thin finger between vertex `index` and its successor.

    The finger leaves the edge midpoint along `direction` (made orthogonal
    to the edge) for `length`; its far end is `width` wide. New vertices
    are spaced like the curve's mean edge.
    """
    if length == 0:
        return curve
    if length < 0 or width <= 0:
        raise ValueError(f"{kind} needs a positive length and width")
    v = curve.vertices
    n = len(v)
    a, b = v[index], v[(index + 1) % n]
    along = _unit(b - a)
    d = np.asarray(direction, dtype=float)
    d = _unit(d - (d @ along) * along)

    tip = 0.5 * (a + b) + length * d
    corners = [a, tip - 0.5 * width * along, tip + 0.5 * width * along, b]
    spacing = float(np.mean(curve.edge_lengths()))
    samples = []
    for p, q in zip(corners[:-1], corners[1:]):
        k = max(1, int(np.ceil(np.linalg.norm(q - p) / spacing)))
        samples.append(line(p, q)(np.arange(k) / k))
    finger = np.vstack(samples)[1:]

    spliced = JordanCurve(np.vstack([v[: index + 1], finger, v[index + 1:]]))
    report = validate_curve(spliced)
    if not report.simple:
        raise SpliceSelfIntersect(f"{kind} at vertex {index} crosses the curve (segments {report.crossing_pairs[:3]})")
    if not report.valid:
        raise SpliceSelfIntersect(f"{kind} at vertex {index}: {'; '.join(report.failures)}")
    log.debug(f"{kind} spliced at vertex {index}: {len(finger)} new vertices")
    return spliced


def add_thin_hook(curve: JordanCurve, attach_param: float, depth: float, width: float, direction=None) -> JordanCurve:
    """Thin long hook pushed into the curve at `attach_param` (fraction of the vertex cycle).

    Without a direction the hook points at the vertex centroid.
    """
    index = attach_index(curve, attach_param)
    if direction is None:
        direction = curve.vertices.mean(axis=0) - curve.vertices[index]
    return splice_finger(curve, index, direction, depth, width, "thin hook")


def add_thin_tail(curve: JordanCurve, direction, length: float, width: float, attach_param: float = 0.0) -> JordanCurve:
    """Thin two-sided excursion that enlarges the convex hull."""
    return splice_finger(curve, attach_index(curve, attach_param), direction, length, width, "thin tail")


def rw_thin_hook(r: float = 4.0, w: float = 0.2, n: int = 240, depth: float = None, width: float = None) -> JordanCurve:
    """The saddle ring plus a thin hook from the far peak, sloping down under the loop.

    The hook stays between the core and the loop plane, so the curve is
    still weak-extreme, but it reaches past the rim of the loop's shadow.
    """
    base = weak_extreme_rw(r, w, n)
    h = 0.25 * r
    slope = 0.6 * h / r
    depth = 1.1 * r * np.sqrt(1.0 + slope ** 2) if depth is None else depth
    width = 0.01 * r if width is None else width
    param = nearest_param(base, (-r, 0.0, h))
    return add_thin_hook(base, param, depth, width, direction=(1.0, 0.0, -slope))


def fig6_tail(n: int = 160, length: float = 2.0, width: float = 0.01, angle: float = 0.6) -> JordanCurve:
    """The hooked circle with a thin tail hanging below the rim next to the hook."""
    base = fig6_config(n)
    param = nearest_param(base, (np.cos(angle), np.sin(angle), 0.0))
    return add_thin_tail(base, (0.0, 0.0, -1.0), length, width, attach_param=param)
