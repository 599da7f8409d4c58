"""Geometric volume oracles, independent of signatures.

* Cyclic polytopes: triangulation by pulling the first vertex, whose simplices
  are selected by Gale's evenness rule, and the exact volume as a sum of
  bordered determinants.
* Exact convex hulls in 2-D (monotone chain) and 3-D (Qhull facets, fan
  triangulation from the centroid).
* A Monte-Carlo estimator over the bounding box for any dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from ._kernels import combos

__all__ = [
    "InputNotDOrder",
    "GaleTriangulation",
    "Hull",
    "gale_index_set",
    "gale_count",
    "simplex_volume_signed",
    "bordered_determinants",
    "cyclic_hull_volume",
    "convex_hull",
    "hull_volume_exact",
    "hull_volume_montecarlo",
]


class InputNotDOrder(ValueError):
    """Points violate the d-order sign condition; ``witness`` is the offending tuple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class GaleTriangulation:
    d: int
    n: int
    simplices: np.ndarray  # (count, d + 1) vertex indices into 0..n

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return (tuple(int(i) for i in s) for s in self.simplices)


def gale_count(d: int, n: int) -> int:
    """Number of simplices in the pulling triangulation of a cyclic polytope with ``n + 1`` vertices."""
    m = d // 2
    span = n if d % 2 == 0 else n - 1
    return math.comb(span - m, m) if span - m >= m else 0


def gale_index_set(d: int, n: int) -> GaleTriangulation:
    """Simplices ``(i_0, ..., i_d)`` triangulating the cyclic polytope on points ``0..n``.

    Every simplex has ``i_0 = 0``; the remaining indices form ``floor(d/2)``
    disjoint consecutive pairs ``(i, i+1)`` in ``1..n`` (even ``d``), or in
    ``1..n-1`` followed by ``i_d = n`` (odd ``d``).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if n < d:
        raise ValueError(f"need n >= d points beyond the first, got n={n}, d={d}")
    m = d // 2
    span = n if d % 2 == 0 else n - 1
    # pair starts s_l = c_l + l with c an increasing m-subset of 1..span-m
    c = combos(span - m, m) + 1
    starts = c + np.arange(m)
    body = np.empty((len(starts), 2 * m), dtype=np.intp)
    body[:, 0::2] = starts
    body[:, 1::2] = starts + 1
    parts = [np.zeros((len(body), 1), dtype=np.intp), body]
    if d % 2:
        parts.append(np.full((len(body), 1), n, dtype=np.intp))
    return GaleTriangulation(d, n, np.hstack(parts))


def bordered_determinants(points: np.ndarray, tuples: np.ndarray) -> np.ndarray:
    """``det [[1 ... 1], [p_{i_0} ... p_{i_d}]]`` for each row of ``tuples``."""
    P = np.asarray(points, dtype=float)
    sel = P[tuples]  # (N, d+1, d)
    diffs = sel[:, 1:, :] - sel[:, :1, :]
    return np.linalg.det(np.swapaxes(diffs, 1, 2))


def simplex_volume_signed(points) -> float:
    """``(1/d!) det [[1 ... 1], [p_0 ... p_d]]`` for ``d + 1`` points in ``R^d``."""
    P = np.asarray(points, dtype=float)
    d = P.shape[1]
    if P.shape[0] != d + 1:
        raise ValueError(f"need {d + 1} points in R^{d}, got {P.shape[0]}")
    return float(np.linalg.det((P[1:] - P[0]).T) / math.factorial(d))


def cyclic_hull_volume(points, d: int | None = None, orientation: int | None = None,
                       check: bool = True) -> float:
    """Volume of the convex hull of points taken in order along a d-order curve.

    ``orientation`` is the common sign of the bordered determinants (``+1`` for
    positively oriented curves, ``-1`` for their mirror images); ``None``
    detects it. Raises :class:`InputNotDOrder` when the sampled sign check fails
    or any triangulation summand has the wrong sign.
    """
    P = np.asarray(points, dtype=float)
    d = P.shape[1] if d is None else int(d)
    if P.shape[1] != d:
        raise ValueError(f"points have dim {P.shape[1]}, expected {d}")
    n = P.shape[0] - 1
    if check:
        from .classify import d_order_test

        # strict sign only: dense samples legitimately give normalized determinants near 1e-14
        res = d_order_test(P, orientation=orientation, tol=0.0)
        if res.status == "fails":
            raise InputNotDOrder(f"points are not in d-order (witness {res.witness})", res.witness)
        orientation = res.orientation
    tri = gale_index_set(d, n)
    dets = bordered_determinants(P, tri.simplices)
    if orientation is None:
        orientation = 1 if dets[0] >= 0 else -1
    bad = np.flatnonzero(orientation * dets <= 0.0)
    if bad.size:
        w = tuple(int(i) for i in tri.simplices[bad[0]])
        raise InputNotDOrder(f"triangulation simplex {w} has the wrong orientation", w)
    return float(orientation * np.sum(dets) / math.factorial(d))


# -- exact hulls ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Hull:
    """Convex hull summary.

    ``equations`` rows are ``(normal, offset)`` with unit outward normals, so
    ``normal @ x + offset <= 0`` inside. ``degenerate`` marks point sets that do
    not span ``R^d``; their volume is 0 and they carry no facets.
    """

    points: np.ndarray
    vertices: np.ndarray
    equations: np.ndarray
    volume: float
    degenerate: bool


def _affine_rank(P: np.ndarray, rtol: float = 1e-12) -> int:
    X = P - P.mean(axis=0)
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0] * max(P.shape)))


def _monotone_chain(P: np.ndarray) -> np.ndarray:
    order = np.lexsort((P[:, 1], P[:, 0]))

    def cross(o, a, b):
        return (P[a, 0] - P[o, 0]) * (P[b, 1] - P[o, 1]) - (P[a, 1] - P[o, 1]) * (P[b, 0] - P[o, 0])

    lower, upper = [], []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return np.array(lower[:-1] + upper[:-1], dtype=np.intp)  # counter-clockwise


def _hull2d(P: np.ndarray) -> Hull:
    idx = _monotone_chain(P)
    V = P[idx]
    nxt = np.roll(V, -1, axis=0)
    area = 0.5 * float(np.sum(V[:, 0] * nxt[:, 1] - nxt[:, 0] * V[:, 1]))
    edge = nxt - V
    normal = np.stack([edge[:, 1], -edge[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1, keepdims=True)
    offset = -np.sum(normal * V, axis=1)
    return Hull(P, idx, np.hstack([normal, offset[:, None]]), area, False)


def _hull_qhull(P: np.ndarray) -> Hull:
    qh = ConvexHull(P)
    d = P.shape[1]
    if d == 3:
        c = P[qh.vertices].mean(axis=0)
        tet = P[qh.simplices] - c
        volume = float(np.sum(np.abs(np.linalg.det(tet))) / 6.0)
    else:
        volume = float(qh.volume)
    return Hull(P, np.asarray(qh.vertices), np.asarray(qh.equations), volume, False)


def convex_hull(points) -> Hull:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2:
        raise ValueError("points must have shape (N, d)")
    d = P.shape[1]
    if P.shape[0] < d + 1 or _affine_rank(P) < d:
        return Hull(P, np.arange(0), np.zeros((0, d + 1)), 0.0, True)
    if d == 1:
        lo, hi = int(np.argmin(P[:, 0])), int(np.argmax(P[:, 0]))
        eq = np.array([[-1.0, P[lo, 0]], [1.0, -P[hi, 0]]])
        return Hull(P, np.array([lo, hi]), eq, float(P[hi, 0] - P[lo, 0]), False)
    if d == 2:
        return _hull2d(P)
    try:
        return _hull_qhull(P)
    except QhullError:
        return Hull(P, np.arange(0), np.zeros((0, d + 1)), 0.0, True)


def hull_volume_exact(points, d: int | None = None) -> float:
    """Exact hull volume for ``d`` in ``{2, 3}``; 0 for rank-deficient input."""
    P = np.asarray(points, dtype=float)
    d = P.shape[1] if d is None else int(d)
    if P.shape[1] != d:
        raise ValueError(f"points have dim {P.shape[1]}, expected {d}")
    if d not in (2, 3):
        raise ValueError("exact hulls are implemented for d in {2, 3}; use the cyclic formula or Monte-Carlo")
    if P.shape[0] < d + 1:
        raise ValueError(f"need at least {d + 1} points")
    return convex_hull(P).volume


def hull_volume_montecarlo(points, d: int | None = None, trials: int = 1_000_000, seed: int = 0,
                           chunk: int = 1 << 16) -> tuple[float, float]:
    """Hit-or-miss estimate of ``vol(conv(points))`` and its binomial standard error.

    Samples come from a Philox (counter-based) generator; chunk ``i`` uses the
    ``i``-th stream spawned from ``seed``, so ``(seed, trials)`` fixes the result.
    """
    P = np.asarray(points, dtype=float)
    d = P.shape[1] if d is None else int(d)
    if trials < 10_000:
        raise ValueError("trials must be >= 1e4")
    lo, hi = P.min(axis=0), P.max(axis=0)
    box = float(np.prod(hi - lo))
    hull = convex_hull(P)
    if hull.degenerate or box == 0.0:
        return 0.0, 0.0
    normals, offsets = hull.equations[:, :-1], hull.equations[:, -1]
    tol = 1e-12 * float(np.max(np.abs(P)))
    n_chunks = -(-trials // chunk)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    for i, ss in enumerate(streams):
        size = min(chunk, trials - i * chunk)
        rng = np.random.Generator(np.random.Philox(ss))
        X = lo + (hi - lo) * rng.random((size, d))
        alive = np.arange(size)
        for f0 in range(0, len(normals), 512):
            s = X[alive] @ normals[f0:f0 + 512].T + offsets[f0:f0 + 512]
            alive = alive[np.all(s <= tol, axis=1)]
            if alive.size == 0:
                break
        hits += alive.size
    p = hits / trials
    return box * p, box * math.sqrt(p * (1.0 - p) / trials)
