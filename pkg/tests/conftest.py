"""Pytest configuration and shared fixtures for weakplateau tests."""

import numpy as np
import pytest


@pytest.fixture
def fast_config():
    """Coarse meshes and a short iteration cap for solver tests."""
    from weakplateau.core.config import SolverConfig
    return SolverConfig(refine_levels=2, max_iterations=400)


@pytest.fixture(scope="session")
def unit_circle():
    from weakplateau.gallery import circle
    return circle(1.0, 64)


@pytest.fixture(scope="session")
def saddle_curve():
    """Weak-extreme ring with one loop hook."""
    from weakplateau.gallery import weak_extreme_rw
    return weak_extreme_rw(4.0, 0.2, 240)


@pytest.fixture(scope="session")
def hooked():
    """Circle with a hook whose tip sits on the convex hull."""
    from weakplateau.gallery import hooked_circle
    return hooked_circle(1.0, 0.6, 0.1, 160)


@pytest.fixture
def cube_mesh():
    """Closed, outward-oriented surface of [-1, 1]^3."""
    from weakplateau.core.geometry import TriMesh
    from weakplateau.core.hull import build_hull
    corners = np.array([[x, y, z] for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)])
    hull = build_hull(corners)
    return TriMesh(hull.vertices, hull.facets, label="cube")


@pytest.fixture
def crossing_mesh():
    """Two vertex-disjoint triangles piercing each other."""
    from weakplateau.core.geometry import TriMesh
    vertices = np.array([
        [-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, 0.0],
        [0.0, -0.5, -1.0], [0.0, 0.5, -1.0], [0.0, 0.0, 1.0],
    ])
    return TriMesh(vertices, np.array([[0, 1, 2], [3, 4, 5]]), label="crossing")


@pytest.fixture
def outputs(tmp_path, monkeypatch):
    """Run directories land in a temporary PLATEAU_OUTPUT_DIR."""
    monkeypatch.setenv("PLATEAU_OUTPUT_DIR", str(tmp_path))
    return tmp_path


@pytest.fixture(scope="session")
def dented():
    """Factory for a unit circle with dents pushed inside its hull.

    Rim vertex `apex` is lifted to z=1 so the hull is solid; dent vertices
    move to radius `depth` at height `lift`, strictly inside the hull.
    """
    from weakplateau.core.geometry import JordanCurve

    def make(dents, n=32, depth=0.7, lift=0.05, apex=20):
        t = 2 * np.pi * np.arange(n) / n
        r, z = np.ones(n), np.zeros(n)
        for a, b in dents:
            r[a:b + 1] = depth
            z[a:b + 1] = lift
        z[apex] = 1.0
        return JordanCurve(np.column_stack([r * np.cos(t), r * np.sin(t), z]))

    return make
