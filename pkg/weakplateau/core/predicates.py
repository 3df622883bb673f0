"""Orientation predicates with a floating-point filter and exact fallback."""

import logging
from fractions import Fraction

import numpy as np

log = logging.getLogger(__name__)

# Shewchuk-style static error bound for the 3x3 determinant
_EPS = np.finfo(float).eps
_O3D_BOUND = (7.0 + 56.0 * _EPS) * _EPS
_O2D_BOUND = (3.0 + 16.0 * _EPS) * _EPS


def _orient3d_exact(a, b, c, d) -> int:
    ax, ay, az = (Fraction(float(a[i])) - Fraction(float(d[i])) for i in range(3))
    bx, by, bz = (Fraction(float(b[i])) - Fraction(float(d[i])) for i in range(3))
    cx, cy, cz = (Fraction(float(c[i])) - Fraction(float(d[i])) for i in range(3))
    det = ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
    return (det > 0) - (det < 0)


def orient3d(a, b, c, d) -> int:
    """Sign of det[a-d, b-d, c-d]: +1, -1 or 0 (exact)."""
    adx, ady, adz = a[0] - d[0], a[1] - d[1], a[2] - d[2]
    bdx, bdy, bdz = b[0] - d[0], b[1] - d[1], b[2] - d[2]
    cdx, cdy, cdz = c[0] - d[0], c[1] - d[1], c[2] - d[2]
    t1 = bdy * cdz - bdz * cdy
    t2 = bdx * cdz - bdz * cdx
    t3 = bdx * cdy - bdy * cdx
    det = adx * t1 - ady * t2 + adz * t3
    permanent = (
        abs(adx) * (abs(bdy * cdz) + abs(bdz * cdy))
        + abs(ady) * (abs(bdx * cdz) + abs(bdz * cdx))
        + abs(adz) * (abs(bdx * cdy) + abs(bdy * cdx))
    )
    if permanent == 0.0:
        return 0
    if abs(det) > _O3D_BOUND * permanent:
        return 1 if det > 0 else -1
    return _orient3d_exact(a, b, c, d)


def orient3d_filter(a, b, c, d):
    """Vectorized float filter over row-aligned (N, 3) arrays.

    Returns (sign, certain). A zero permanent means an exact zero determinant,
    which counts as certain.
    """
    a, b, c, d = (np.asarray(x, dtype=float).reshape(-1, 3) for x in (a, b, c, d))
    ad, bd, cd = a - d, b - d, c - d
    det = np.einsum("ij,ij->i", ad, np.cross(bd, cd))
    permanent = (
        np.abs(ad[:, 0]) * (np.abs(bd[:, 1] * cd[:, 2]) + np.abs(bd[:, 2] * cd[:, 1]))
        + np.abs(ad[:, 1]) * (np.abs(bd[:, 0] * cd[:, 2]) + np.abs(bd[:, 2] * cd[:, 0]))
        + np.abs(ad[:, 2]) * (np.abs(bd[:, 0] * cd[:, 1]) + np.abs(bd[:, 1] * cd[:, 0]))
    )
    certain = (np.abs(det) > _O3D_BOUND * permanent) | (permanent == 0.0)
    return np.sign(det).astype(int), certain


def orient3d_batch(a, b, c, d) -> np.ndarray:
    """Vectorized orient3d; rows the filter cannot certify are recomputed exactly."""
    a, b, c, d = (np.asarray(x, dtype=float).reshape(-1, 3) for x in (a, b, c, d))
    out, certain = orient3d_filter(a, b, c, d)
    for i in np.nonzero(~certain)[0]:
        out[i] = _orient3d_exact(a[i], b[i], c[i], d[i])
    return out


def orient2d(a, b, c) -> int:
    """Sign of the 2-D cross product (b-a) x (c-a)."""
    det_l = (a[0] - c[0]) * (b[1] - c[1])
    det_r = (a[1] - c[1]) * (b[0] - c[0])
    det = det_l - det_r
    if abs(det) > _O2D_BOUND * (abs(det_l) + abs(det_r)):
        return 1 if det > 0 else -1
    fa = [Fraction(float(x)) for x in a[:2]]
    fb = [Fraction(float(x)) for x in b[:2]]
    fc = [Fraction(float(x)) for x in c[:2]]
    exact = (fa[0] - fc[0]) * (fb[1] - fc[1]) - (fa[1] - fc[1]) * (fb[0] - fc[0])
    return (exact > 0) - (exact < 0)


def perturbed_sign(s):
    """Symbolic perturbation: an exact zero is treated as positive."""
    return np.where(np.asarray(s) >= 0, 1, -1)
