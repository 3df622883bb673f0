"""Tests for the curve gallery: families, splices and the registry."""

import numpy as np
import pytest


class TestFamilies:
    @pytest.mark.parametrize("name", ["circle", "sphere_wave", "crown", "hooked_circle", "fig6_config",
                                      "weak_extreme_rw", "fig2_config", "fig3_config", "trefoil",
                                      "noisy_circle", "rw_thin_hook", "fig6_tail"])
    def test_defaults_are_valid_curves(self, name):
        from weakplateau.core.geometry import validate_curve
        from weakplateau.gallery import CURVE_FAMILIES
        curve = CURVE_FAMILIES[name]()
        assert validate_curve(curve).valid

    def test_deterministic(self):
        """Equal arguments give bit-identical vertices."""
        from weakplateau.gallery import fig2_config, noisy_circle
        assert np.array_equal(fig2_config().vertices, fig2_config().vertices)
        assert np.array_equal(noisy_circle(seed=3).vertices, noisy_circle(seed=3).vertices)
        assert not np.array_equal(noisy_circle(seed=3).vertices, noisy_circle(seed=4).vertices)

    def test_vertex_count(self):
        from weakplateau.gallery import circle, weak_extreme_rw
        assert len(circle(1.0, 48)) == 48
        assert len(weak_extreme_rw(n=200)) == 200

    def test_circle_radius(self):
        from weakplateau.gallery import circle
        assert np.allclose(np.linalg.norm(circle(2.5, 32).vertices, axis=1), 2.5)

    def test_crown_is_extreme(self):
        from weakplateau.core.hull import is_extreme_curve
        from weakplateau.gallery import crown
        assert is_extreme_curve(crown())

    @pytest.mark.parametrize("w", [0.2, 1.0, 2.0, 2.5, 3.5, 3.9])
    def test_rw_accepts_any_neck_below_r(self, w):
        from weakplateau.core.geometry import validate_curve
        from weakplateau.gallery import weak_extreme_rw
        curve = weak_extreme_rw(4.0, w, 240)
        assert validate_curve(curve).valid
        assert np.linalg.norm(curve.vertices[:, :2], axis=1).max() <= 4.0 + 1e-12

    def test_rw_neck_must_be_narrower_than_r(self):
        from weakplateau.gallery import weak_extreme_rw
        with pytest.raises(ValueError, match="w must lie"):
            weak_extreme_rw(4.0, 4.0)

    def test_rw_narrow_neck_keeps_loop_size(self):
        """Up to w = r/2 the loop radius is fixed at 0.3 r."""
        from weakplateau.gallery import weak_extreme_rw
        for w in (0.2, 1.5):
            top = weak_extreme_rw(4.0, w, 240).vertices
            loop = top[np.isclose(top[:, 2], 0.59)]
            assert loop[:, 0].min() == pytest.approx(0.0, abs=0.05)

    def test_zero_depth_hook_is_a_circle(self):
        from weakplateau.gallery import circle, hooked_circle
        assert np.array_equal(hooked_circle(1.0, 0.0, n=64).vertices, circle(1.0, 64).vertices)

    def test_too_few_vertices(self):
        from weakplateau.gallery import circle
        with pytest.raises(ValueError, match="at least"):
            circle(1.0, 4)

    def test_fig3_chord_closes_the_spiral(self):
        """Every vertex but the chord lies on the unit sphere."""
        from weakplateau.gallery import fig3_config
        radii = np.linalg.norm(fig3_config().vertices, axis=1)
        assert np.isclose(radii, 1.0).sum() > 0.5 * len(radii)
        assert radii.min() < 0.9


class TestSplices:
    def test_zero_length_is_identity(self, unit_circle):
        from weakplateau.gallery import add_thin_tail
        assert add_thin_tail(unit_circle, (0.0, 0.0, -1.0), 0.0, 0.01) is unit_circle

    def test_tail_adds_vertices(self, unit_circle):
        from weakplateau.gallery import add_thin_tail
        tail = add_thin_tail(unit_circle, (0.0, 0.0, -1.0), 1.0, 0.01)
        assert len(tail) > len(unit_circle)
        assert tail.vertices[:, 2].min() == pytest.approx(-1.0)
        # original vertices kept in order
        kept = [tuple(x) for x in tail.vertices]
        assert all(tuple(x) in kept for x in unit_circle.vertices)

    def test_hook_through_the_curve_rejected(self, unit_circle):
        from weakplateau.errors import SpliceSelfIntersect
        from weakplateau.gallery import add_thin_hook
        with pytest.raises(SpliceSelfIntersect):
            add_thin_hook(unit_circle, 0.0, 3.0, 0.01)

    def test_bad_width(self, unit_circle):
        from weakplateau.gallery import add_thin_tail
        with pytest.raises(ValueError):
            add_thin_tail(unit_circle, (0.0, 0.0, -1.0), 1.0, 0.0)

    def test_tail_grows_the_hull(self):
        from weakplateau.core.hull import hull_or_planar
        from weakplateau.gallery import fig6_config, fig6_tail
        base = hull_or_planar(fig6_config().vertices)
        tail = hull_or_planar(fig6_tail().vertices)
        assert tail.vertices[:, 2].min() < base.vertices[:, 2].min()


class TestRegistry:
    def test_family_parameters(self):
        from weakplateau.gallery import family_parameters
        assert family_parameters("circle") == {"radius": 1.0, "n": 64}

    def test_splice_parameters_skip_the_base(self):
        from weakplateau.gallery import family_parameters
        assert "curve" not in family_parameters("add_thin_tail")

    def test_unknown_family(self):
        from weakplateau.gallery import CurveSpec, make_curve
        with pytest.raises(ValueError, match="Unknown curve family"):
            make_curve(CurveSpec(family="spiral"))

    def test_make_curve(self):
        from weakplateau.gallery import CurveSpec, circle, make_curve
        curve = make_curve(CurveSpec(family="circle", params={"radius": 2.0}, n=32))
        assert np.array_equal(curve.vertices, circle(2.0, 32).vertices)

    def test_unknown_parameter(self):
        from weakplateau.gallery import CurveSpec, make_curve
        with pytest.raises(ValueError, match="does not take"):
            make_curve(CurveSpec(family="circle", params={"lobes": 3}))

    def test_seed_only_where_accepted(self):
        """A seed on a deterministic family is ignored."""
        from weakplateau.gallery import CurveSpec, make_curve
        a = make_curve(CurveSpec(family="circle", seed=5))
        b = make_curve(CurveSpec(family="circle"))
        assert np.array_equal(a.vertices, b.vertices)
        c = make_curve(CurveSpec(family="noisy_circle", seed=5))
        d = make_curve(CurveSpec(family="noisy_circle", seed=6))
        assert not np.array_equal(c.vertices, d.vertices)

    def test_splice_needs_a_base(self, unit_circle):
        from weakplateau.gallery import CurveSpec, make_curve
        spec = CurveSpec(family="add_thin_tail", params={"direction": [0.0, 0.0, 1.0], "length": 0.5, "width": 0.01})
        with pytest.raises(ValueError, match="needs a base"):
            make_curve(spec)
        assert len(make_curve(spec, base=unit_circle)) > len(unit_circle)
