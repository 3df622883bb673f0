"""Tests for region constraints: hulls, closed barriers and one-sided walls."""

import numpy as np
import pytest

CUBE = np.array([[x, y, z] for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)])


def _floor(size=2.0):
    """Open square wall in the plane z = 0."""
    from weakplateau.core.geometry import TriMesh
    s = size
    v = np.array([[-s, -s, 0.0], [s, -s, 0.0], [s, s, 0.0], [-s, s, 0.0]])
    return TriMesh(v, np.array([[0, 1, 2], [0, 2, 3]]), label="floor")


class TestFeasibility:
    def test_closed_region(self, cube_mesh):
        from weakplateau.core.regions import closed_region
        region = closed_region(cube_mesh, 0.01)
        assert list(region.feasible([[0, 0, 0], [0.5, -0.5, 0.9], [0, 0, 2]])) == [True, True, False]

    def test_open_wall_uses_reference_side(self):
        from weakplateau.core.hull import build_hull
        from weakplateau.core.regions import side_region
        region = side_region(build_hull(CUBE * 3), _floor(), [0.0, 0.0, 1.0], 0.01, "above")
        assert list(region.feasible([[0.2, 0.1, 0.5], [0.2, 0.1, -0.5]])) == [True, False]

    def test_hull_region(self):
        from weakplateau.core.regions import hull_region
        region = hull_region(CUBE, 0.01)
        assert list(region.feasible([[0, 0, 0], [1.5, 0, 0]])) == [True, False]

    def test_carve_rejects_split_samples(self):
        from weakplateau.core.regions import carve_region
        from weakplateau.errors import CarveFailed
        with pytest.raises(CarveFailed):
            carve_region(CUBE, _floor(), [[0, 0, 0.5], [0, 0, -0.5]], 0.01, "split")

    def test_boundary_outside_hull(self, unit_circle):
        from weakplateau.core.regions import hull_region
        from weakplateau.errors import BoundaryOutsideRegion
        region = hull_region(CUBE * 0.5, 0.01, "small")
        with pytest.raises(BoundaryOutsideRegion):
            region.check_boundary(unit_circle.vertices, 1e-9)


class TestEnforce:
    """Vertices that leave the region are put back delta inside."""

    def test_open_wall_push_back(self):
        from weakplateau.core.hull import build_hull
        from weakplateau.core.regions import side_region
        region = side_region(build_hull(CUBE * 3), _floor(), [0.0, 0.0, 1.0], 0.01, "above")
        x, contact = region.enforce(np.array([[0.3, 0.2, 1.0]]), np.array([[0.3, 0.2, -1.0]]), np.array([True]))
        assert np.allclose(x[0], [0.3, 0.2, 0.01])
        assert contact[0]

    def test_closed_barrier_push_back(self, cube_mesh):
        from weakplateau.core.regions import closed_region
        region = closed_region(cube_mesh, 0.01)
        # off the diagonal of the top face
        x, contact = region.enforce(np.zeros((1, 3)), np.array([[0.3, 0.1, 3.0]]), np.array([True]))
        assert np.allclose(x[0], [0.3, 0.1, 0.99])
        assert contact[0]

    def test_hull_projection(self):
        from weakplateau.core.regions import hull_region
        region = hull_region(CUBE, 0.01)
        x, contact = region.enforce(np.zeros((1, 3)), np.array([[0.0, 0.0, 3.0]]), np.array([True]))
        assert x[0, 2] == pytest.approx(0.99)
        assert contact[0]

    def test_pinned_vertices_untouched(self):
        from weakplateau.core.regions import hull_region
        region = hull_region(CUBE, 0.01)
        new = np.array([[0.0, 0.0, 3.0]])
        x, contact = region.enforce(np.zeros((1, 3)), new, np.array([False]))
        assert np.array_equal(x, new)
        assert not contact.any()

    def test_interior_move_is_free(self, cube_mesh):
        from weakplateau.core.regions import closed_region
        region = closed_region(cube_mesh, 0.01)
        new = np.array([[0.2, 0.3, 0.4]])
        x, contact = region.enforce(np.zeros((1, 3)), new, np.array([True]))
        assert np.array_equal(x, new)
        assert not contact.any()
