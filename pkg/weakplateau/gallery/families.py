"""Deterministic curve families.

Every generator returns a JordanCurve that passes validate_curve. The hooked
families are built from a rim function plus hook paths sampled piece by
piece, so the corners that carry the hull contact pattern are exact
vertices.
"""

import logging
from dataclasses import dataclass

import numpy as np

from weakplateau.core.geometry import MIN_CURVE_VERTICES, JordanCurve, validate_curve
from weakplateau.errors import InvalidCurve

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


# Sampling helpers

def line(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return lambda t: a + np.outer(t, b - a)


def bezier(a, c, b):
    """Quadratic Bezier from a to b with control point c."""
    a, c, b = (np.asarray(x, dtype=float) for x in (a, c, b))
    return lambda t: (
        np.outer((1 - t) ** 2, a) + np.outer(2 * t * (1 - t), c) + np.outer(t ** 2, b)
    )


def _allocate(lengths, n: int) -> np.ndarray:
    lengths = np.maximum(np.asarray(lengths, dtype=float), 1e-12)
    counts = np.maximum(1, np.floor(n * lengths / lengths.sum()).astype(int))
    while counts.sum() < n:
        counts[np.argmax(lengths / counts)] += 1
    while counts.sum() > n:
        spare = np.where(counts > 1, counts / lengths, -np.inf)
        counts[np.argmax(spare)] -= 1
    return counts


def _compose(pieces, n: int) -> np.ndarray:
    """Sample consecutive pieces into n vertices.

    Each piece maps t in [0, 1] to points and contributes its start point
    but not its end point, which is the next piece's start.
    """
    if n < len(pieces):
        raise ValueError(f"{n} vertices cannot cover {len(pieces)} curve pieces")
    fine = [f(np.linspace(0.0, 1.0, 65)) for f in pieces]
    lengths = [np.linalg.norm(np.diff(p, axis=0), axis=1).sum() for p in fine]
    counts = _allocate(lengths, n)
    return np.vstack([f(np.arange(k) / k) for f, k in zip(pieces, counts)])


def checked(vertices, family: str) -> JordanCurve:
    curve = JordanCurve(vertices)
    report = validate_curve(curve)
    if not report.valid:
        raise InvalidCurve(f"{family} produced an invalid curve: {'; '.join(report.failures)}")
    return curve


def _check_count(n: int, minimum: int = MIN_CURVE_VERTICES):
    if n < minimum:
        raise ValueError(f"n must be at least {minimum}, got {n}")


# Baselines

def circle(radius: float = 1.0, n: int = 64) -> JordanCurve:
    """Regular planar n-gon in the xy plane."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    _check_count(n)
    t = TWO_PI * np.arange(n) / n
    return checked(np.column_stack([radius * np.cos(t), radius * np.sin(t), np.zeros(n)]), "circle")


def sphere_wave(radius: float = 1.0, lobes: int = 3, amplitude: float = 0.4, n: int = 120) -> JordanCurve:
    """Curve on a sphere whose latitude oscillates `lobes` times around a great circle."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if not 0 <= amplitude < np.pi / 2:
        raise ValueError(f"amplitude must lie in [0, pi/2), got {amplitude}")
    _check_count(n)
    lon = TWO_PI * np.arange(n) / n
    lat = amplitude * np.sin(lobes * lon)
    pts = radius * np.column_stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)])
    return checked(pts, "sphere_wave")


def crown_rim(radius: float, fingers: int, height: float):
    """z = height * cos(fingers * theta) on the cylinder of the given radius."""
    def rim(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return np.column_stack([radius * np.cos(theta), radius * np.sin(theta), height * np.cos(fingers * theta)])
    return rim


def crown(radius: float = 1.0, fingers: int = 4, height: float = 0.25, n: int = 128) -> JordanCurve:
    """Extreme crown: every vertex sits on the cylinder wall."""
    if radius <= 0 or fingers < 0:
        raise ValueError("crown needs a positive radius and a non-negative finger count")
    _check_count(n)
    rim = crown_rim(radius, fingers, height)
    return checked(rim(TWO_PI * np.arange(n) / n), "crown")


def trefoil(scale: float = 1.0, n: int = 120) -> JordanCurve:
    """(2,3) torus knot, scaled to unit-ish size."""
    _check_count(n, 60)
    t = TWO_PI * np.arange(n) / n
    r = 2.0 + np.cos(3 * t)
    pts = np.column_stack([r * np.cos(2 * t), r * np.sin(2 * t), np.sin(3 * t)])
    return checked(scale * pts / 3.0, "trefoil")


def noisy_circle(radius: float = 1.0, noise: float = 0.05, n: int = 64, seed: int = 0) -> JordanCurve:
    """Circle with seeded radial and vertical jitter."""
    if radius <= 0 or noise < 0:
        raise ValueError("noisy_circle needs a positive radius and non-negative noise")
    _check_count(n)
    rng = np.random.default_rng(seed)
    t = TWO_PI * np.arange(n) / n
    rho = radius * (1.0 + noise * rng.standard_normal(n))
    z = radius * noise * rng.standard_normal(n)
    return checked(np.column_stack([rho * np.cos(t), rho * np.sin(t), z]), "noisy_circle")


# Hooked circles

def hooked_circle(radius: float = 1.0, hook_depth: float = 0.6, hook_width: float = 0.1, n: int = 160) -> JordanCurve:
    """Planar circle with one hook that dives below the disk and re-enters above it.

    The hook leaves the rim at -eps, bends down to a tip S, rises straight
    through the disk plane to a peak P and bends back to the rim at +eps.
    S and P are single hull vertices, so fragment merging folds them into
    one hook whose middle segment crosses the flat core.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if hook_depth < 0:
        raise ValueError(f"hook_depth must be non-negative, got {hook_depth}")
    if hook_depth == 0:
        return circle(radius, n)
    if not 0 < hook_width < 0.5 * radius:
        raise ValueError(f"hook_width must lie in (0, radius/2), got {hook_width}")
    _check_count(n, 32)

    eps = hook_width / radius
    inset = 0.15 * radius
    peak = 0.5 * hook_depth

    def at(theta, rho, z):
        return np.array([rho * np.cos(theta), rho * np.sin(theta), z])

    k0, k7 = at(-eps, radius, 0.0), at(eps, radius, 0.0)
    tip = at(-eps, radius - inset, -hook_depth)
    top = at(eps, radius - inset - hook_width, peak)
    pieces = [
        lambda t: np.column_stack([radius * np.cos(eps + t * (TWO_PI - 2 * eps)),
                                   radius * np.sin(eps + t * (TWO_PI - 2 * eps)),
                                   np.zeros(len(t))]),
        bezier(k0, at(-eps, radius - inset, 0.0), tip),
        line(tip, top),
        bezier(top, at(eps, radius - inset - hook_width, 0.0), k7),
    ]
    return checked(_compose(pieces, n), "hooked_circle")


def fig6_config(n: int = 160, hook_depth: float = 0.6, hook_width: float = 0.1) -> JordanCurve:
    """The hooked circle whose lower hook tip lies on the hull boundary."""
    return hooked_circle(1.0, hook_depth, hook_width, n)


# Rings carrying loop hooks

@dataclass(frozen=True)
class LoopHook:
    """A planar loop hanging off the rim at `angle`.

    The loop is a circle of `loop_radius` centred `center` from the axis
    along the angle's ray, at height `level`. Two straight necks `neck`
    apart join it to the rim.
    """
    angle: float
    center: float
    loop_radius: float
    level: float
    neck: float


def _hook_pieces(rim, radius: float, hook: LoopHook):
    eta = np.arcsin(hook.neck / (2.0 * radius))
    phi = np.arcsin(0.5 * hook.neck / hook.loop_radius)
    er = np.array([np.cos(hook.angle), np.sin(hook.angle), 0.0])
    et = np.array([-np.sin(hook.angle), np.cos(hook.angle), 0.0])
    ez = np.array([0.0, 0.0, 1.0])

    def local(x, y, z):
        return np.outer(x, er) + np.outer(y, et) + np.outer(z, ez)

    start = rim(hook.angle - eta)[0]
    end = rim(hook.angle + eta)[0]
    gap = hook.center + hook.loop_radius * np.cos(phi)
    g_minus = local([gap], [-0.5 * hook.neck], [hook.level])[0]
    g_plus = local([gap], [0.5 * hook.neck], [hook.level])[0]

    def loop(t):
        a = -phi - t * (TWO_PI - 2 * phi)
        return local(hook.center + hook.loop_radius * np.cos(a), hook.loop_radius * np.sin(a), np.full(len(t), hook.level))

    return eta, [line(start, g_minus), loop, line(g_plus, end)]


def ring_with_hooks(rim, radius: float, hooks, n: int, family: str) -> JordanCurve:
    """Rim arcs between consecutive hooks, starting just after the first hook."""
    hooks = sorted(hooks, key=lambda h: h.angle % TWO_PI)
    spans = [_hook_pieces(rim, radius, h) for h in hooks]
    pieces = []
    for k, hook in enumerate(hooks):
        nxt = (k + 1) % len(hooks)
        a = hook.angle + spans[k][0]
        b = hooks[nxt].angle - spans[nxt][0]
        if nxt == 0:
            b += TWO_PI
        if b <= a:
            raise ValueError(f"{family}: hooks at {hook.angle} and {hooks[nxt].angle} overlap")
        pieces.append(lambda t, a=a, b=b: rim(a + t * (b - a)))
        pieces.extend(spans[nxt][1])
    return checked(_compose(pieces, n), family)


def weak_extreme_rw(r: float = 4.0, w: float = 0.2, n: int = 240) -> JordanCurve:
    """Saddle ring of radius r with one loop hook whose necks are w apart.

    The rim is z = (r/4) cos 2theta. The loop sits between the core and
    the top of the hull, so the hook is tight, lies on one side of the core
    and never meets it. The loop widens with w and stays within 0.9 r of
    the axis.
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if not 0 < w < r:
        raise ValueError(f"w must lie in (0, r), got {w}")
    _check_count(n, 64)
    h = 0.25 * r
    hook = LoopHook(angle=0.0, center=0.3 * r, loop_radius=max(0.3 * r, 0.6 * w), level=0.59 * h, neck=w)
    return ring_with_hooks(crown_rim(r, 2, h), r, [hook], n, "weak_extreme_rw")


def fig2_config(n: int = 320) -> JordanCurve:
    """Four-finger crown with three hooks above the core and one below."""
    _check_count(n, 128)
    r, h = 1.0, 0.25
    hooks = [
        LoopHook(angle=a, center=0.45 * r, loop_radius=0.15 * r, level=side * 0.55 * h, neck=0.06 * r)
        for a, side in ((0.0, 1), (0.5 * np.pi, 1), (np.pi, 1), (1.25 * np.pi, -1))
    ]
    return ring_with_hooks(crown_rim(r, 4, h), r, hooks, n, "fig2_config")


def fig3_config(n: int = 160, turns: float = 1.25, reach: float = np.pi / 3) -> JordanCurve:
    """Spherical spiral closed by the straight chord between its ends.

    The spiral is the single contact arc. The chord is the one hook and
    runs through the ball, so its replacement on the hull has to cross
    the spiral.
    """
    _check_count(n, 32)
    if not 0 < reach < np.pi / 2:
        raise ValueError(f"reach must lie in (0, pi/2), got {reach}")

    def spiral(t):
        lat = -reach + 2 * reach * t
        lon = TWO_PI * turns * t
        return np.column_stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)])

    top, bottom = spiral(np.array([1.0]))[0], spiral(np.array([0.0]))[0]
    return checked(_compose([spiral, line(top, bottom)], n), "fig3_config")
