"""Truncated path signatures and alternating (antisymmetrized) signatures.

Two independent routes to the alternating signature of a piecewise-linear path
are provided:

* the tensor route: exact truncated signature by Chen concatenation of segment
  exponentials, followed by :func:`alt`;
* the combinatorial route :func:`pl_alternating`: with piecewise constant
  velocity, ``alpha_P = (1/k!) * sum_{i_1<...<i_k} det(P-rows of dx_{i_1..i_k})``.
  The sum is accumulated as an ordered exterior product of ``(1 + dx_i)`` one
  exterior degree at a time, which equals the determinant sum term by term
  (multilinearity) in ``O(n * 2^d)`` work instead of ``O(C(n, k))``.
  :func:`alternating_determinant_sum` enumerates the determinants directly.

Smooth curves can additionally be integrated with nested Gauss-Legendre
quadrature over the ordered simplex (:func:`alt_volume_quadrature`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from ._kernels import combos, subset_determinant_sum
from .curve_model import CurveFamily, as_polyline

__all__ = [
    "SignatureTensor",
    "TruncatedSignature",
    "AlternatingTensor",
    "segment_signature",
    "segment_series",
    "chen_concat",
    "pl_signature",
    "alt",
    "pl_alternating",
    "alternating_determinant_sum",
    "alt_volume_quadrature",
    "signed_area_matrix",
    "permutation_sign",
    "MAX_TENSOR_LEVEL",
    "MAX_QUADRATURE_DIM",
]

MAX_TENSOR_LEVEL = 6
MAX_QUADRATURE_DIM = 4


@dataclass(frozen=True, eq=False)
class SignatureTensor:
    """Level-``k`` signature component, a dense array of shape ``(d,) * k``."""

    dim: int
    level: int
    data: np.ndarray

    def __getitem__(self, index):
        return self.data[tuple(np.asarray(index) - 1)] if self.level else self.data[()]


@dataclass(frozen=True, eq=False)
class TruncatedSignature:
    """Signature levels ``0..depth``; level 0 is the scalar 1 for a path."""

    dim: int
    levels: tuple

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, k: int) -> SignatureTensor:
        return SignatureTensor(self.dim, k, self.levels[k])

    def flatten(self, start: int = 1) -> np.ndarray:
        return np.concatenate([np.ravel(x) for x in self.levels[start:]])

    @classmethod
    def identity(cls, dim: int, depth: int) -> "TruncatedSignature":
        return cls(dim, tuple([np.array(1.0)] + [np.zeros((dim,) * k) for k in range(1, depth + 1)]))


@dataclass(frozen=True, eq=False)
class AlternatingTensor:
    """Coordinates ``alpha_P`` over order-preserving injections ``P: [k] -> [d]``.

    ``injections`` lists the index tuples (1-based, lexicographic) matching
    ``data``. For ``level > dim`` the exterior power is zero: ``data`` is empty
    and ``valid`` is False.
    """

    dim: int
    level: int
    data: np.ndarray
    valid: bool = True

    @property
    def injections(self) -> list:
        if not self.valid:
            return []
        return [tuple(int(i) + 1 for i in c) for c in combos(self.dim, self.level)]

    def __getitem__(self, P) -> float:
        P = tuple(P)
        return float(self.data[self.injections.index(P)])

    @property
    def value(self) -> float:
        """The scalar ``alpha^(d)`` when ``level == dim``."""
        if self.level != self.dim:
            raise ValueError("scalar value only defined at the top level k = d")
        return float(self.data[0])

    def as_matrix(self) -> np.ndarray:
        """Skew-symmetric ``d x d`` matrix for level 2."""
        if self.level != 2:
            raise ValueError("matrix form only exists at level 2")
        A = np.zeros((self.dim, self.dim))
        for (i, j), val in zip(combos(self.dim, 2), self.data):
            A[i, j] = val
            A[j, i] = -val
        return A


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _signed_permutations(k: int):
    perms = list(permutations(range(k)))
    return np.array(perms, dtype=np.intp).reshape(len(perms), k), np.array([permutation_sign(p) for p in perms], dtype=float)


# -- tensor route ---------------------------------------------------------------

def segment_signature(v, level: int) -> SignatureTensor:
    """``v^{(x)k} / k!``, the level-``k`` signature of a straight segment."""
    v = np.asarray(v, dtype=float)
    if level < 0:
        raise ValueError("level must be >= 0")
    out = np.array(1.0)
    for _ in range(level):
        out = np.multiply.outer(out, v)
    return SignatureTensor(v.shape[0], level, out / math.factorial(level))


def segment_series(v, depth: int) -> TruncatedSignature:
    v = np.asarray(v, dtype=float)
    return TruncatedSignature(v.shape[0], tuple(segment_signature(v, k).data for k in range(depth + 1)))


def chen_concat(s1: TruncatedSignature, s2: TruncatedSignature) -> TruncatedSignature:
    """Signature of the concatenated path: level ``k`` is ``sum_{a+b=k} s1^(a) (x) s2^(b)``."""
    if s1.dim != s2.dim:
        raise ValueError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    if s1.depth != s2.depth:
        raise ValueError(f"truncation mismatch: {s1.depth} vs {s2.depth}")
    levels = []
    for k in range(s1.depth + 1):
        acc = np.zeros((s1.dim,) * k)
        for a in range(k + 1):
            acc = acc + np.multiply.outer(s1.levels[a], s2.levels[k - a])
        levels.append(acc)
    return TruncatedSignature(s1.dim, tuple(levels))


def pl_signature(curve, depth: int) -> TruncatedSignature:
    """Exact truncated signature of a PL path (levels ``0..depth``)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > MAX_TENSOR_LEVEL:
        raise ValueError(f"tensor route capped at depth {MAX_TENSOR_LEVEL}")
    curve = as_polyline(curve)
    sig = TruncatedSignature.identity(curve.dim, depth)
    for v in curve.increments:
        sig = chen_concat(sig, segment_series(v, depth))
    return sig


def alt(sig) -> AlternatingTensor:
    """Antisymmetrization ``Alt(sigma)_P = (1/k!) sum_tau sgn(tau) sigma_{P o tau}``."""
    data = sig.data if isinstance(sig, SignatureTensor) else np.asarray(sig, dtype=float)
    k = data.ndim
    d = data.shape[0] if k else 0
    if k > d:
        return AlternatingTensor(d, k, np.zeros(0), valid=False)
    if k == 0:
        return AlternatingTensor(d, 0, np.array([float(data)]))
    perms, signs = _signed_permutations(k)
    P = combos(d, k)  # (C, k)
    idx = P[:, perms]  # (C, k!, k)
    vals = data[tuple(np.moveaxis(idx, -1, 0))]  # (C, k!)
    return AlternatingTensor(d, k, vals @ signs / math.factorial(k))


# -- combinatorial route ----------------------------------------------------------

@lru_cache(maxsize=None)
def _wedge_tables(d: int, j: int):
    """Index tables for ``(j-1)-form ^ vector -> j-form`` in ``R^d``.

    Returns ``(src, vec, sign)`` of shape ``(C(d, j), j)``: coefficient of the
    ``j``-subset ``S`` is ``sum_p sign[S, p] * F[src[S, p]] * v[vec[S, p]]``.
    """
    lower = {tuple(c): i for i, c in enumerate(combos(d, j - 1))}
    upper = combos(d, j)
    src = np.zeros(upper.shape, dtype=np.intp)
    vec = np.zeros(upper.shape, dtype=np.intp)
    sign = np.zeros(upper.shape)
    for r, S in enumerate(upper):
        for p in range(j):
            rest = tuple(int(x) for x in np.delete(S, p))
            src[r, p] = lower[rest]
            vec[r, p] = S[p]
            sign[r, p] = (-1.0) ** (j - 1 - p)
    return src, vec, sign


def _exterior_levels(increments: np.ndarray, k: int) -> list:
    """Coefficients of ``prod_i (1 + dx_i)`` (ordered wedge) at degrees ``0..k``.

    Degree ``j`` holds ``sum_{i_1<...<i_j} dx_{i_1} ^ ... ^ dx_{i_j}`` in the
    basis of ``j``-subsets of coordinates.
    """
    n, d = increments.shape
    out = [np.ones(1)]
    prefix = np.ones((n, 1))  # degree j-1 form accumulated strictly before segment i
    for j in range(1, k + 1):
        src, vec, sign = _wedge_tables(d, j)
        terms = prefix[:, src] * increments[:, vec] * sign  # (n, C(d,j), j)
        contrib = terms.sum(axis=-1)
        running = np.cumsum(contrib, axis=0)
        out.append(running[-1].copy() if n else np.zeros(len(src)))
        prefix = np.vstack([np.zeros((1, running.shape[1])), running[:-1]])
    return out


def pl_alternating(curve, level: int) -> AlternatingTensor:
    """Exact level-``k`` alternating signature of a PL path, no tensors built."""
    curve = as_polyline(curve)
    d = curve.dim
    if level > d:
        return AlternatingTensor(d, level, np.zeros(0), valid=False)
    if level < 0:
        raise ValueError("level must be >= 0")
    coeffs = _exterior_levels(curve.increments, level)[level]
    return AlternatingTensor(d, level, coeffs / math.factorial(level))


def alternating_determinant_sum(curve, P=None) -> float:
    """``alpha_P`` by explicit enumeration of the ``C(n, k)`` segment determinants.

    ``P`` is a 1-based increasing index tuple (defaults to all coordinates).
    """
    curve = as_polyline(curve)
    rows = np.arange(curve.dim) if P is None else np.asarray(P, dtype=np.intp) - 1
    return subset_determinant_sum(curve.increments, rows) / math.factorial(len(rows))


# -- smooth curves ----------------------------------------------------------------

def _simplex_rule(d: int, nodes: int):
    """Gauss-Legendre points/weights on ``{0 <= t_1 < ... < t_d <= 1}``.

    Iterated substitution ``t_j = t_{j+1} * s_j`` with a Gauss-Legendre rule in
    each ``s_j``. Returns ``T`` of shape ``(nodes^d, d)`` (increasing columns)
    and weights of shape ``(nodes^d,)``.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    T = x[:, None]
    W = w.copy()
    for _ in range(d - 1):
        upper = T[:, :1]
        new = upper[:, None, :] * x[None, :, None]  # (N, nodes, 1)
        T = np.concatenate([new, np.repeat(T[:, None, :], nodes, axis=1)], axis=2).reshape(-1, T.shape[1] + 1)
        W = (W[:, None] * upper * w[None, :]).reshape(-1)
    return T, W


def alt_volume_quadrature(curve: CurveFamily, d: int | None = None, nodes: int = 24) -> float:
    """``alpha^(d) = (1/d!) * int_{simplex} det(x'(t_1), ..., x'(t_d))`` by nested quadrature."""
    if not isinstance(curve, CurveFamily):
        raise TypeError("quadrature needs a CurveFamily with derivatives")
    d = curve.dim if d is None else int(d)
    if d != curve.dim:
        raise ValueError(f"curve dimension {curve.dim} != requested d={d}")
    if d > MAX_QUADRATURE_DIM:
        raise ValueError(f"nested quadrature supports d <= {MAX_QUADRATURE_DIM}; refine a PL discretization instead")
    T, W = _simplex_rule(d, nodes)
    vel = curve.derivative(T, 1)  # (N, d(time), d(coord))
    dets = np.linalg.det(np.swapaxes(vel, 1, 2)) if d > 1 else vel[:, 0, 0]
    return float(np.sum(W * dets) / math.factorial(d))


def signed_area_matrix(curve, nodes: int = 64) -> np.ndarray:
    """Skew matrix ``A_ij = alpha_ij = (sigma_ij - sigma_ji) / 2``.

    Exact for PL curves (prefix sums). For a :class:`CurveFamily` the inner
    integral is done analytically, ``int_0^{t} x'_i = x_i(t) - x_i(0)``, and the
    outer one with ``nodes`` Gauss-Legendre points.
    """
    if isinstance(curve, CurveFamily):
        x, w = np.polynomial.legendre.leggauss(nodes)
        t = 0.5 * (x + 1.0)
        w = 0.5 * w
        rel = curve.point(t) - curve.point(0.0)
        vel = curve.derivative(t, 1)
        M = np.einsum("n,ni,nj->ij", w, rel, vel)
    else:
        dx = as_polyline(curve).increments
        before = np.cumsum(dx, axis=0) - dx
        M = before.T @ dx
    A = 0.5 * (M - M.T)
    return A
