"""scikit-learn style transformers over collections of curves.

Each sample is one curve: an ``(n_i, d)`` vertex array, a
:class:`~sigvolume.curve_model.PiecewiseLinearCurve`, or a
:class:`~sigvolume.curve_model.CurveFamily` (discretized at ``n_segments``).
All curves in a collection must share the ambient dimension seen at ``fit``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .curve_model import CurveFamily, PiecewiseLinearCurve, discretize
from .decomposition import volume_via_eigenvalues
from .signature import MAX_TENSOR_LEVEL, pl_alternating, pl_signature

__all__ = ["check_curves", "PathSignature", "AlternatingSignature", "SignatureVolume"]


def check_curves(X, dim: int | None = None, n_segments: int = 2000) -> list:
    """Validate a collection of curves and return them as PL curves.

    Parameters
    ----------
    X : iterable
        Vertex arrays, PL curves or parametric families. A single 2-D array is
        rejected as ambiguous; wrap it in a list.
    dim : int, optional
        Required ambient dimension.
    n_segments : int
        Discretization for parametric families.

    Raises
    ------
    ValueError
        Empty input, malformed vertex arrays, non-finite values or mixed dimensions.
    """
    if isinstance(X, np.ndarray) and X.ndim == 2:
        raise ValueError("expected a collection of curves; wrap a single (n, d) array in a list")
    if isinstance(X, (PiecewiseLinearCurve, CurveFamily)):
        raise ValueError("expected a collection of curves; wrap a single curve in a list")
    curves = []
    for i, item in enumerate(X):
        if isinstance(item, CurveFamily):
            c = discretize(item, n_segments)
        elif isinstance(item, PiecewiseLinearCurve):
            c = item
        else:
            arr = np.asarray(item, dtype=float)
            if arr.ndim != 2 or arr.shape[0] < 2:
                raise ValueError(f"curve {i}: expected shape (n >= 2, d), got {arr.shape}")
            c = PiecewiseLinearCurve(arr)
        if not np.all(np.isfinite(c.vertices)):
            raise ValueError(f"curve {i}: non-finite vertices")
        if dim is None:
            dim = c.dim
        elif c.dim != dim:
            raise ValueError(f"curve {i}: dimension {c.dim}, expected {dim}")
        curves.append(c)
    if not curves:
        raise ValueError("no curves given")
    return curves


class _CurveTransformer(TransformerMixin, BaseEstimator):
    n_segments = 2000

    def fit(self, X, y=None):
        curves = check_curves(X, n_segments=self.n_segments)
        self.dim_ = curves[0].dim
        self._validate_level()
        return self

    def _validate_level(self):
        pass

    def _curves(self, X):
        check_is_fitted(self, "dim_")
        return check_curves(X, dim=self.dim_, n_segments=self.n_segments)


class PathSignature(_CurveTransformer):
    """Flattened truncated signature, levels ``1..depth``.

    Output width is ``d + d^2 + ... + d^depth``.
    """

    def __init__(self, depth: int = 2, n_segments: int = 2000):
        self.depth = depth
        self.n_segments = n_segments

    def _validate_level(self):
        if not 1 <= self.depth <= MAX_TENSOR_LEVEL:
            raise ValueError(f"depth must be in 1..{MAX_TENSOR_LEVEL}")

    def transform(self, X):
        curves = self._curves(X)
        return np.vstack([pl_signature(c, self.depth).flatten() for c in curves])


class AlternatingSignature(_CurveTransformer):
    """Coordinates of the level-``k`` alternating signature (``k = d`` by default).

    Output width is ``C(d, k)``, ordered lexicographically by index set.
    """

    def __init__(self, level: int | None = None, n_segments: int = 2000):
        self.level = level
        self.n_segments = n_segments

    def _validate_level(self):
        k = self.dim_ if self.level is None else self.level
        if not 1 <= k <= self.dim_:
            raise ValueError(f"level must be in 1..{self.dim_}")
        self.level_ = k

    def transform(self, X):
        curves = self._curves(X)
        return np.vstack([pl_alternating(c, self.level_).data for c in curves])


class SignatureVolume(_CurveTransformer):
    """One column: ``alpha^(d)`` of each curve, its hull volume for cyclic curves.

    ``method="determinant"`` uses the exact PL formula; ``method="eigen"`` uses
    the block spectrum of the signed-area matrix and returns ``|alpha^(d)|``.
    """

    def __init__(self, method: str = "determinant", n_segments: int = 2000):
        self.method = method
        self.n_segments = n_segments

    def _validate_level(self):
        if self.method not in ("determinant", "eigen"):
            raise ValueError("method must be 'determinant' or 'eigen'")

    def transform(self, X):
        curves = self._curves(X)
        if self.method == "eigen":
            vals = [volume_via_eigenvalues(c) for c in curves]
        else:
            vals = [pl_alternating(c, self.dim_).value for c in curves]
        return np.asarray(vals, dtype=float)[:, None]
