"""Sampling certificates for the curve classes

    totally positive torsion  <  strict determinant  <  d-order  <  cyclic.

Each test returns a :class:`ClassTest`. ``holds`` means no violation was found
at the sampled resolution; ``fails`` carries a concrete witness whose
determinant can be re-evaluated; ``inapplicable`` means the test cannot decide
(missing derivatives, rank-deficient point sets).

Determinant signs refer to an ``orientation``: ``+1`` tests the curve as given,
``-1`` tests its mirror image under ``x_d -> -x_d``. Curves such as
``log(1, 2, 3)`` in ``R^3`` have every bordered determinant negative, so they are
d-order only in the mirrored orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import combos
from .cyclic_polytope import convex_hull
from .curve_model import CurveFamily, PiecewiseLinearCurve

__all__ = [
    "ClassTest",
    "ClassificationReport",
    "BoundaryReport",
    "torsion_test",
    "strict_det_test",
    "d_order_test",
    "cyclic_relaxed_test",
    "boundary_membership",
    "classify_curve",
    "parameter_grid",
    "POSITIVITY_TOL",
    "RELAXED_TOL",
]

POSITIVITY_TOL = 1e-12
RELAXED_TOL = 1e-10
EXHAUSTIVE_POINTS = 20
RANDOM_TUPLES = 100_000
TUPLE_SEED = 0x5EED


@dataclass(frozen=True)
class ClassTest:
    status: str  # "holds" | "fails" | "inapplicable"
    witness: tuple | None = None
    min_det: float | None = None
    samples_used: int = 0
    orientation: int = 1
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "witness": None if self.witness is None else list(self.witness),
            "min_det": self.min_det,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ClassificationReport:
    torsion: ClassTest
    strict_det: ClassTest
    d_order: ClassTest
    cyclic_relaxed: ClassTest
    samples_used: int
    orientation: int = 1

    def to_dict(self) -> dict:
        return {
            "torsion": self.torsion.to_dict(),
            "strict_det": self.strict_det.to_dict(),
            "d_order": self.d_order.to_dict(),
            "cyclic_relaxed": self.cyclic_relaxed.to_dict(),
            "samples_used": self.samples_used,
            "orientation": self.orientation,
        }


@dataclass(frozen=True)
class BoundaryReport:
    fraction: float
    offenders: list = field(default_factory=list)
    degenerate: bool = False


def parameter_grid(grid) -> np.ndarray:
    """``grid`` interior parameters ``i / (grid + 1)``, or an explicit increasing array."""
    if np.isscalar(grid):
        g = int(grid)
        if g < 1:
            raise ValueError("grid must be >= 1")
        return np.arange(1, g + 1) / (g + 1)
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) <= 0):
        raise ValueError("explicit grids must be strictly increasing 1-D arrays")
    return t


def _unit_columns(M: np.ndarray) -> np.ndarray:
    # normalize the last-but-one axis (columns of (..., d, k) stacks); zero columns stay zero
    norms = np.linalg.norm(M, axis=-2, keepdims=True)
    return np.divide(M, norms, out=np.zeros_like(M), where=norms > 0)


def _mirror(M: np.ndarray, orientation: int, axis: int = -2) -> np.ndarray:
    if orientation == 1:
        return M
    M = np.array(M, copy=True)
    idx = [slice(None)] * M.ndim
    idx[axis] = -1
    M[tuple(idx)] *= -1.0
    return M


def torsion_test(curve, d: int | None = None, grid=101, orientation: int = 1) -> ClassTest:
    """Positivity of all leading principal minors of ``(x'(t), ..., x^(d)(t))``."""
    d = curve.dim if d is None else int(d)
    if d != curve.dim:
        raise ValueError(f"curve dimension {curve.dim} != d={d}")
    # one nested central difference is tolerable; deeper nesting is noise
    if not curve.has_exact_derivative(d - 1):
        return ClassTest("inapplicable", orientation=orientation, note="d-th derivative unavailable")
    t = parameter_grid(grid)
    T = np.stack([curve.derivative(t, k) for k in range(1, d + 1)], axis=-1)  # (G, coord, order)
    T = _unit_columns(_mirror(T, orientation))
    minors = np.stack([np.linalg.det(T[:, :k, :k]) for k in range(1, d + 1)], axis=1)
    worst = minors.min(axis=1)
    bad = np.flatnonzero(worst <= POSITIVITY_TOL)
    witness = (float(t[bad[0]]),) if bad.size else None
    return ClassTest("fails" if bad.size else "holds", witness, float(worst.min()), len(t), orientation)


def strict_det_test(curve, d: int | None = None, grid=51, orientation: int = 1) -> ClassTest:
    """``det(x'(t_1), ..., x'(t_d)) > 0`` for all increasing ``d``-tuples of the grid."""
    d = curve.dim if d is None else int(d)
    if d != curve.dim:
        raise ValueError(f"curve dimension {curve.dim} != d={d}")
    t = parameter_grid(grid)
    if len(t) < d:
        raise ValueError(f"grid needs at least {d} parameters")
    V = _mirror(curve.derivative(t, 1), orientation, axis=-1)
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    V = np.divide(V, norms, out=np.zeros_like(V), where=norms > 0)
    tuples = combos(len(t), d)
    dets = _tuple_dets(lambda tup: np.swapaxes(V[tup], 1, 2), tuples)
    bad = np.flatnonzero(dets <= POSITIVITY_TOL)
    witness = tuple(float(x) for x in t[tuples[bad[0]]]) if bad.size else None
    return ClassTest("fails" if bad.size else "holds", witness, float(dets.min()), len(t), orientation)


def _tuple_dets(build, tuples: np.ndarray, block: int = 200_000) -> np.ndarray:
    out = np.empty(len(tuples))
    for s in range(0, len(tuples), block):
        out[s:s + block] = np.linalg.det(build(tuples[s:s + block]))
    return out


def _scan_tuples(n_points: int, k: int) -> np.ndarray:
    """Tuples tested by the point-set scans, sorted lexicographically.

    Exhaustive up to ``EXHAUSTIVE_POINTS`` points; otherwise every consecutive
    tuple plus a fixed-seed sample of ``RANDOM_TUPLES`` increasing tuples.
    """
    if n_points <= EXHAUSTIVE_POINTS:
        return combos(n_points, k)
    consecutive = np.arange(n_points - k + 1)[:, None] + np.arange(k)
    rng = np.random.default_rng(TUPLE_SEED)
    sample = np.sort(rng.integers(0, n_points, size=(int(RANDOM_TUPLES * 1.5), k)), axis=1)
    sample = sample[np.all(np.diff(sample, axis=1) > 0, axis=1)][:RANDOM_TUPLES]
    return np.unique(np.vstack([consecutive, sample]), axis=0)


def _bordered_normalized(P: np.ndarray, tuples: np.ndarray) -> np.ndarray:
    """Bordered determinants with each difference column ``p_j - p_0`` scaled to unit length."""
    def build(tup):
        sel = P[tup]
        return _unit_columns(np.swapaxes(sel[:, 1:, :] - sel[:, :1, :], 1, 2))
    return _tuple_dets(build, tuples)


def _points(points, d):
    if isinstance(points, PiecewiseLinearCurve):
        points = points.vertices
    P = np.asarray(points, dtype=float)
    d = P.shape[1] if d is None else int(d)
    if P.ndim != 2 or P.shape[1] != d:
        raise ValueError(f"points must have shape (N, {d})")
    if P.shape[0] < d + 1:
        raise ValueError(f"need at least d + 1 = {d + 1} points")
    return P, d


def _witness(tup, params):
    return tuple(float(params[i]) for i in tup) if params is not None else tuple(int(i) for i in tup)


def d_order_test(points, d: int | None = None, orientation: int | None = 1, params=None,
                 tol: float = POSITIVITY_TOL) -> ClassTest:
    """Strict sign condition on ``det [[1 ... 1], [x(t_0) ... x(t_d)]]`` over ordered tuples.

    ``points`` must be sampled at increasing parameters. ``orientation=None``
    takes the sign of the first tuple. The witness holds point indices, or the
    matching entries of ``params`` when given.
    """
    P, d = _points(points, d)
    tuples = _scan_tuples(len(P), d + 1)
    dets = _bordered_normalized(P, tuples)
    if orientation is None:
        orientation = -1 if dets[0] < 0 else 1
    signed = orientation * dets
    bad = np.flatnonzero(signed <= tol)
    witness = _witness(tuples[bad[0]], params) if bad.size else None
    return ClassTest("fails" if bad.size else "holds", witness, float(signed.min()), len(tuples), orientation)


def cyclic_relaxed_test(points, d: int | None = None, orientation: int | None = 1, params=None,
                        tol: float = RELAXED_TOL) -> ClassTest:
    """Non-negative bordered determinants plus a span check.

    Only a certificate for point sets spanning ``R^d``; rank-deficient input is
    ``inapplicable`` because the relaxed condition is vacuous there.
    """
    P, d = _points(points, d)
    X = P - P.mean(axis=0)
    s = np.linalg.svd(X, compute_uv=False)
    rank = int(np.sum(s > 1e-12 * max(s[0], 1e-300) * max(P.shape)))
    if rank < d:
        return ClassTest("inapplicable", orientation=orientation or 1, samples_used=0,
                         note=f"points span a {rank}-dimensional affine subspace")
    tuples = _scan_tuples(len(P), d + 1)
    dets = _bordered_normalized(P, tuples)
    if orientation is None:
        nz = dets[np.abs(dets) > tol]
        orientation = -1 if nz.size and nz[0] < 0 else 1
    signed = orientation * dets
    bad = np.flatnonzero(signed < -tol)
    witness = _witness(tuples[bad[0]], params) if bad.size else None
    return ClassTest("fails" if bad.size else "holds", witness, float(signed.min()), len(tuples), orientation)


def boundary_membership(points, d: int | None = None, tol: float = 1e-9) -> BoundaryReport:
    """Fraction of sample points on the boundary of their convex hull.

    A point is interior when it lies strictly inside every facet half-space by
    more than ``tol`` times the point-set scale.
    """
    P, d = _points(points, d)
    if d not in (2, 3):
        raise ValueError("boundary membership uses exact hulls, d in {2, 3}")
    hull = convex_hull(P)
    if hull.degenerate:
        return BoundaryReport(1.0, [], True)
    scale = max(float(np.max(np.abs(P - P.mean(axis=0)))), 1e-300)
    slack = P @ hull.equations[:, :-1].T + hull.equations[:, -1]
    interior = np.all(slack < -tol * scale, axis=1)
    offenders = [int(i) for i in np.flatnonzero(interior)]
    return BoundaryReport(1.0 - len(offenders) / len(P), offenders, False)


def classify_curve(curve, d: int | None = None, torsion_grid=101, det_grid=51, n_points: int = 40,
                   orientation: int | None = None) -> ClassificationReport:
    """Run all four class tests in one orientation.

    Parametric curves are sampled at ``n_points`` interior parameters for the
    point-set tests; PL curves use their vertices. ``orientation=None`` detects
    the sign from the point samples.
    """
    d = curve.dim if d is None else int(d)
    if isinstance(curve, CurveFamily):
        params = parameter_grid(n_points)
        pts = curve.point(params)
    else:
        params = None
        pts = curve.vertices
    if orientation is None:
        orientation = cyclic_relaxed_test(pts, d, orientation=None).orientation
    d_ord = d_order_test(pts, d, orientation, params)
    cyc = cyclic_relaxed_test(pts, d, orientation, params)
    tor = torsion_test(curve, d, torsion_grid, orientation)
    sdet = strict_det_test(curve, d, det_grid, orientation)
    used = tor.samples_used + sdet.samples_used + d_ord.samples_used + cyc.samples_used
    return ClassificationReport(tor, sdet, d_ord, cyc, used, orientation)
