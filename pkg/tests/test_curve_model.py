import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigvolume.curve_model import (
    CurveDimensionError,
    CurveFamily,
    CurveFileError,
    PiecewiseLinearCurve,
    curve_from_dict,
    discretize,
    displacement,
    double_loop,
    load_curve,
    restrict,
)

FAMILIES = [
    CurveFamily.moment(2),
    CurveFamily.moment(3),
    CurveFamily.moment(4),
    CurveFamily.log(1, 2, 3),
    CurveFamily.circle2d(),
    CurveFamily.circle3d_triple(),
    CurveFamily.polynomial([[0, 1], [0.0625, -0.5, 1.5, -2, 1]]),
]


class TestDiscretize:
    def test_moment2_single_segment(self):
        np.testing.assert_array_equal(discretize(CurveFamily.moment(2), 1).vertices, [[0, 0], [1, 1]])

    def test_moment2_two_segments(self):
        np.testing.assert_array_equal(discretize(CurveFamily.moment(2), 2).vertices,
                                      [[0, 0], [0.5, 0.25], [1, 1]])

    def test_log_single_segment(self):
        v = discretize(CurveFamily.log(1, 2, 3), 1).vertices
        np.testing.assert_allclose(v, [[0, 0, 0], [math.log(2), math.log(3), math.log(4)]], rtol=0, atol=1e-15)

    def test_rejects_zero_segments(self):
        with pytest.raises(ValueError):
            discretize(CurveFamily.moment(2), 0)

    @pytest.mark.parametrize("curve", FAMILIES, ids=repr)
    def test_endpoints_exact(self, curve):
        pl = discretize(curve, 37)
        assert np.array_equal(pl.vertices[0], curve.point(0.0))
        assert np.array_equal(pl.vertices[-1], curve.point(1.0))

    @pytest.mark.parametrize("curve", FAMILIES, ids=repr)
    def test_refinement_shares_vertices(self, curve):
        coarse, fine = discretize(curve, 16), discretize(curve, 32)
        assert np.max(np.abs(coarse.vertices - fine.vertices[::2])) == 0.0

    @pytest.mark.parametrize("curve", [CurveFamily.moment(3), CurveFamily.log(1, 2, 3), CurveFamily.circle2d()],
                             ids=repr)
    def test_sup_distance_decays_quadratically(self, curve):
        ns = np.array([16, 32, 64, 128, 256, 512])
        t = np.linspace(0, 1, 20001)
        dist = [np.max(np.linalg.norm(discretize(curve, n).point(t) - discretize(curve, 2 * n).point(t), axis=1))
                for n in ns]
        slope = np.polyfit(np.log(ns), np.log(dist), 1)[0]
        assert slope <= -1.9


class TestDisplacementAndRestrict:
    def test_moment3_displacement(self):
        np.testing.assert_array_equal(displacement(CurveFamily.moment(3)), [1, 1, 1])

    def test_closed_loop_displacement(self):
        np.testing.assert_array_equal(displacement(double_loop()), [0, 0])

    def test_log_displacement(self):
        np.testing.assert_allclose(displacement(CurveFamily.log(1, 2, 3)), np.log([2, 3, 4]), atol=1e-15)

    def test_identity_restriction(self):
        c = CurveFamily.moment(2)
        t = np.linspace(0, 1, 11)
        np.testing.assert_array_equal(restrict(c, 0, 1).point(t), c.point(t))

    def test_half_restriction_endpoint(self):
        np.testing.assert_allclose(restrict(CurveFamily.moment(2), 0, 0.5).point(1.0), [0.5, 0.25])

    def test_restriction_scales_derivatives(self):
        c = CurveFamily.moment(3).restrict(0.2, 0.6)
        t = np.array([0.3])
        h = 1e-5
        fd = (c.point(t + h) - c.point(t - h)) / (2 * h)
        np.testing.assert_allclose(c.derivative(t, 1), fd, rtol=1e-8)

    def test_pl_restriction_inside_one_segment(self):
        pl = PiecewiseLinearCurve([[0, 0], [1, 0], [1, 1]])
        sub = pl.restrict(0.1, 0.4)
        assert sub.n_segments == 1
        np.testing.assert_allclose(sub.vertices, [[0.2, 0], [0.8, 0]])

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            restrict(CurveFamily.moment(2), 0.5, 0.5)

    @given(a=st.floats(0, 0.9), w=st.floats(0.05, 1), a2=st.floats(0, 0.9), w2=st.floats(0.05, 1))
    def test_restrictions_compose(self, a, w, a2, w2):
        b, b2 = min(a + w, 1.0), min(a2 + w2, 1.0)
        c = CurveFamily.log(1, 2, 3)
        nested = restrict(restrict(c, a, b), a2, b2)
        direct = restrict(c, a + a2 * (b - a), a + b2 * (b - a))
        t = np.random.default_rng(0).uniform(0, 1, 10)
        np.testing.assert_allclose(nested.point(t), direct.point(t), rtol=0, atol=1e-12)


class TestFamilies:
    @pytest.mark.parametrize("curve", FAMILIES, ids=repr)
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_analytic_derivatives_match_central_differences(self, curve, order):
        t = np.linspace(0.1, 0.9, 7)
        h = 1e-4
        fd = (curve.derivative(t + h, order - 1) - curve.derivative(t - h, order - 1)) / (2 * h)
        scale = np.max(np.abs(curve.derivative(t, order))) + 1.0
        np.testing.assert_allclose(curve.derivative(t, order), fd, atol=1e-5 * scale)

    def test_moment_formula(self):
        t = 0.3
        np.testing.assert_allclose(CurveFamily.moment(4).point(t), [t, t**2, t**3, t**4])

    def test_circle3d_triple_formula(self):
        t = 0.1
        np.testing.assert_allclose(CurveFamily.circle3d_triple().point(t),
                                   [math.cos(2 * math.pi * t), math.sin(2 * math.pi * t), math.cos(6 * math.pi * t)])

    @pytest.mark.parametrize("bad", [(1, 1, 2), (-1, 2, 3)])
    def test_log_parameters_validated(self, bad):
        with pytest.raises(ValueError):
            CurveFamily.log(*bad)

    def test_custom_derivative_checked(self):
        with pytest.raises(ValueError):
            CurveFamily.custom(lambda t: np.stack([t, t**2], -1), [lambda t: np.stack([np.ones_like(t), t], -1)])

    def test_custom_without_derivative_uses_differences(self):
        c = CurveFamily.custom(lambda t: np.stack([t, t**2], -1))
        np.testing.assert_allclose(c.derivative(np.array([0.5]), 1), [[1.0, 1.0]], atol=1e-8)
        assert not c.has_exact_derivative(1)

    def test_custom_accepts_consistent_derivative(self):
        c = CurveFamily.custom(lambda t: np.stack([np.sin(t), t**3], -1),
                               [lambda t: np.stack([np.cos(t), 3 * t**2], -1)])
        assert c.dim == 2 and c.has_exact_derivative(1)


class TestPiecewiseLinear:
    def test_increments(self):
        pl = PiecewiseLinearCurve([[0, 0], [1, 0], [1, 0], [1, 2]])
        assert pl.increments.shape == (3, 2)
        np.testing.assert_array_equal(pl.increments[1], [0, 0])

    def test_vertices_are_read_only(self):
        pl = PiecewiseLinearCurve([[0, 0], [1, 1]])
        with pytest.raises(ValueError):
            pl.vertices[0, 0] = 5

    def test_needs_two_vertices(self):
        with pytest.raises(ValueError):
            PiecewiseLinearCurve([[0, 0]])

    def test_point_interpolates(self):
        pl = PiecewiseLinearCurve([[0, 0], [2, 0], [2, 2]])
        np.testing.assert_allclose(pl.point(0.75), [2, 1])


class TestCurveFiles:
    def test_pl_round_trip(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"kind": "pl", "dim": 2, "vertices": [[0, 0], [1, 0], [1, 1]]}))
        c = load_curve(path)
        assert isinstance(c, PiecewiseLinearCurve) and c.n_segments == 2

    def test_families(self):
        assert curve_from_dict({"kind": "moment", "dim": 3}).dim == 3
        assert curve_from_dict({"kind": "log", "params": [1, 2, 3]}).dim == 3
        assert curve_from_dict({"kind": "circle3d_triple"}).dim == 3

    def test_unknown_kind(self):
        with pytest.raises(CurveFileError):
            curve_from_dict({"kind": "spiral"})

    def test_declared_dim_mismatch(self):
        with pytest.raises(CurveDimensionError):
            curve_from_dict({"kind": "pl", "dim": 3, "vertices": [[0, 0], [1, 1]]})

    def test_requested_dim_mismatch(self):
        with pytest.raises(CurveDimensionError):
            curve_from_dict({"kind": "circle2d"}, dim=3)

    def test_ragged_vertices(self):
        with pytest.raises(CurveDimensionError):
            curve_from_dict({"kind": "samples", "vertices": [[0, 0], [1, 1, 1]]})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(CurveFileError):
            load_curve(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CurveFileError):
            load_curve(tmp_path / "absent.json")
