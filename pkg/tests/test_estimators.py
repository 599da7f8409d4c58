import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from _helpers import random_pl
from sigvolume.curve_model import CurveFamily, PiecewiseLinearCurve, discretize
from sigvolume.estimators import AlternatingSignature, PathSignature, SignatureVolume, check_curves
from sigvolume.signature import pl_alternating


@pytest.fixture
def curves3(rng):
    return [random_pl(rng, 6, 3) for _ in range(5)]


class TestCheckCurves:
    def test_mixed_inputs(self, rng):
        out = check_curves([random_pl(rng, 4, 2), PiecewiseLinearCurve([[0, 0], [1, 1]]), CurveFamily.moment(2)],
                           n_segments=10)
        assert [c.n_segments for c in out] == [3, 1, 10]

    def test_bare_array_rejected(self, rng):
        with pytest.raises(ValueError, match="wrap"):
            check_curves(random_pl(rng, 4, 2))

    def test_single_curve_rejected(self):
        with pytest.raises(ValueError, match="wrap"):
            check_curves(CurveFamily.moment(2))

    def test_empty(self):
        with pytest.raises(ValueError):
            check_curves([])

    def test_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            check_curves([[[0, 0], [np.nan, 1]]])

    def test_mixed_dimensions(self, rng):
        with pytest.raises(ValueError, match="dimension"):
            check_curves([random_pl(rng, 4, 2), random_pl(rng, 4, 3)])

    def test_too_short(self):
        with pytest.raises(ValueError):
            check_curves([[[0, 0]]])


class TestEstimators:
    @pytest.mark.parametrize("est", [PathSignature(depth=3), AlternatingSignature(level=2),
                                     SignatureVolume(method="eigen")], ids=type)
    def test_params_and_clone(self, est):
        c = clone(est)
        assert c.get_params() == est.get_params()
        c.set_params(n_segments=50)
        assert c.n_segments == 50 and est.n_segments == 2000

    def test_path_signature_width(self, curves3):
        X = PathSignature(depth=3).fit_transform(curves3)
        assert X.shape == (5, 3 + 9 + 27)
        np.testing.assert_allclose(X[:, :3], [c[-1] - c[0] for c in curves3])

    def test_alternating_default_level(self, curves3):
        est = AlternatingSignature().fit(curves3)
        assert est.level_ == 3
        X = est.transform(curves3)
        assert X.shape == (5, 1)
        np.testing.assert_allclose(X[:, 0], [pl_alternating(PiecewiseLinearCurve(c), 3).value for c in curves3])

    def test_alternating_level_width(self, curves3):
        assert AlternatingSignature(level=2).fit_transform(curves3).shape == (5, 3)

    def test_volume_methods_agree_on_cyclic_curves(self):
        X = [CurveFamily.moment(3), discretize(CurveFamily.moment(3), 500), CurveFamily.log(1, 2, 3)]
        det = SignatureVolume().fit_transform(X)
        eig = SignatureVolume(method="eigen").fit_transform(X)
        assert det.shape == eig.shape == (3, 1)
        np.testing.assert_allclose(eig, np.abs(det), rtol=1e-9)

    def test_pipeline(self, curves3):
        pipe = make_pipeline(PathSignature(depth=2), StandardScaler())
        assert pipe.fit_transform(curves3).shape == (5, 12)

    def test_not_fitted(self, curves3):
        with pytest.raises(NotFittedError):
            PathSignature().transform(curves3)

    def test_dimension_checked_at_transform(self, curves3, rng):
        est = PathSignature().fit(curves3)
        with pytest.raises(ValueError, match="dimension"):
            est.transform([random_pl(rng, 4, 2)])

    @pytest.mark.parametrize("est", [PathSignature(depth=0), PathSignature(depth=99), AlternatingSignature(level=4),
                                     SignatureVolume(method="qhull")], ids=repr)
    def test_invalid_hyperparameters_fail_at_fit(self, est, curves3):
        with pytest.raises(ValueError):
            est.fit(curves3)
