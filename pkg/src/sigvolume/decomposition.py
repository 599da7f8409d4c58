"""Alternating signatures from level-1 and level-2 data.

Top-level alternating signatures factor through the displacement and the
signed-area matrix ``A = alpha^(2)``:

* even ``k``: ``alpha_P`` is a Pfaffian-type sum over products of entries of ``A``;
* odd ``k``: ``alpha_P`` is a signed sum of displacement coordinates times even
  ``alpha``'s of one lower level.

Block-diagonalizing ``A = Q Lambda Q^T`` with ``Q`` in ``SO(d)`` turns the top
level into a product of planar signed areas, which is what
:func:`volume_via_eigenvalues` evaluates.

All prefactors live in :data:`CONSTANTS` and are pinned by :func:`calibrate`
against the direct determinant route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .curve_model import CurveFamily, as_polyline, discretize
from .signature import permutation_sign, pl_alternating, signed_area_matrix

__all__ = [
    "SkewSpectrum",
    "CONSTANTS",
    "PRINTED_CONSTANTS",
    "skew_spectrum",
    "pfaffian",
    "decompose_even",
    "decompose_odd",
    "decompose_odd_full",
    "align_displacement",
    "reduced_signed_area",
    "alternating_via_eigenvalues",
    "volume_via_eigenvalues",
    "calibrate",
]

SKEW_RTOL = 1e-12
MAX_SUM_LEVEL = 8


def _even_sum_constant(k: int) -> float:
    return 1.0 / (math.factorial(k) * math.factorial(k // 2))


def _odd_sum_constant(k: int) -> float:
    return 1.0 / (math.factorial(k) * math.factorial((k - 1) // 2))


def _volume_even_constant(d: int) -> float:
    n = d // 2
    return 2.0 ** n / math.factorial(2 * n)


def _volume_odd_constant(d: int) -> float:
    n = d // 2
    return 2.0 ** n / math.factorial(2 * n + 1)


# Calibrated prefactors; each is checked against direct alpha by ``calibrate``.
#   even_sum(k):  alpha_P = c * sum_tau sgn(tau) prod_r A[P(tau(2r-1)), P(tau(2r))]
#   odd_sum(k):   alpha_P = c * sum_tau sgn(tau) s[P(tau(1))] prod_r A[P(tau(2r)), P(tau(2r+1))]
#   odd_step(k):  alpha_P = c * sum_i (-1)^(i+1) s[P(i)] alpha_{P_i}
#   volume_even(d): alpha^(d) = c * prod(lambda)
#   volume_odd(d):  alpha^(d) = c * |x(1) - x(0)| * prod(lambda of the reduced curve)
#   reduction(d):   alpha^(d) = c * |x(1) - x(0)| * alpha^(d-1)(reduced curve)
CONSTANTS = {
    "even_sum": _even_sum_constant,
    "odd_sum": _odd_sum_constant,
    "odd_step": lambda k: 1.0 / k,
    "volume_even": _volume_even_constant,
    "volume_odd": _volume_odd_constant,
    "reduction": lambda d: 1.0 / d,
}

# The prefactors as printed alongside the eigenvalue formula; kept so that
# ``calibrate`` can report how far they are from the measured values.
PRINTED_CONSTANTS = {
    "volume_even": lambda d: (-1.0) ** (d // 2) / (math.factorial(d) * math.factorial(d // 2)),
    "volume_odd": lambda d: (-1.0) ** (d // 2) / (math.factorial(d) * math.factorial(d // 2)),
    "reduction": lambda d: 1.0 / math.factorial(d),
}


# -- skew-symmetric spectra --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SkewSpectrum:
    """Real block form ``A = Q Lambda Q^T`` of a skew-symmetric matrix.

    Attributes
    ----------
    lambdas : ndarray, shape (d // 2,)
        Upper entries of the 2x2 blocks, by descending magnitude, signed.
    Q : ndarray, shape (d, d)
        Rotation (``det Q = +1``) whose column pairs span the blocks.
    residual_axis : ndarray or None
        Last column of ``Q`` for odd ``d``, the kernel direction.
    """

    lambdas: np.ndarray
    Q: np.ndarray
    residual_axis: np.ndarray | None

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    def block(self) -> np.ndarray:
        """The block-diagonal matrix ``Lambda``."""
        L = np.zeros((self.dim, self.dim))
        for k, lam in enumerate(self.lambdas):
            L[2 * k, 2 * k + 1] = lam
            L[2 * k + 1, 2 * k] = -lam
        return L


def _check_skew(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    scale = np.linalg.norm(A)
    if np.linalg.norm(A + A.T) > SKEW_RTOL * max(scale, 1e-300):
        raise ValueError("matrix is not skew-symmetric")
    return 0.5 * (A - A.T)


def _skew_tridiagonalize(A: np.ndarray):
    """Householder reduction ``A = H T H^T`` with ``T`` skew tridiagonal."""
    d = A.shape[0]
    T = A.copy()
    H = np.eye(d)
    for j in range(d - 2):
        x = T[j + 1:, j]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0]) if x[0] != 0.0 else alpha
        v /= np.linalg.norm(v)
        # apply P = I - 2 v v^T on rows/cols j+1..
        T[j + 1:, :] -= 2.0 * np.outer(v, v @ T[j + 1:, :])
        T[:, j + 1:] -= 2.0 * np.outer(T[:, j + 1:] @ v, v)
        H[:, j + 1:] -= 2.0 * np.outer(H[:, j + 1:] @ v, v)
    e = np.array([T[i, i + 1] for i in range(d - 1)])
    return e, H


def skew_spectrum(A) -> SkewSpectrum:
    """Block-diagonalize a skew-symmetric matrix with a rotation.

    Householder reflections bring ``A`` to skew tridiagonal form. Reordering
    even and odd indices turns that into ``[[0, B], [-B^T, 0]]`` with ``B``
    bidiagonal; the singular triplets ``(u, s, v)`` of ``B`` give the column
    pairs ``(u on even slots, v on odd slots)`` with block entry ``s``.
    """
    A = _check_skew(A)
    d = A.shape[0]
    n = d // 2
    if d == 0:
        return SkewSpectrum(np.zeros(0), np.eye(0), None)
    e, H = _skew_tridiagonalize(A)
    ev, od = np.arange(0, d, 2), np.arange(1, d, 2)
    B = np.zeros((len(ev), len(od)))
    for a in range(len(ev)):
        if 2 * a < d - 1:
            B[a, a] = e[2 * a]
        if a >= 1:
            B[a, a - 1] = -e[2 * a - 1]
    U, s, Vt = np.linalg.svd(B) if B.size else (np.eye(len(ev)), np.zeros(0), np.eye(0))
    V = Vt.T

    cols, lams = [], []
    for k in range(n):
        p = np.zeros(d)
        q = np.zeros(d)
        p[ev] = U[:, k]
        q[od] = V[:, k]
        p, q = H @ p, H @ q
        cols.append((p, q))
        lams.append(float(s[k]))
    residual = None
    if d % 2:
        r = np.zeros(d)
        r[ev] = U[:, n]
        residual = H @ r

    # deterministic order and signs: descending |lambda|, ties by column lexicographic order
    def sign_fix(v):
        nz = np.flatnonzero(np.abs(v) > 1e-14)
        return -1.0 if nz.size and v[nz[0]] < 0 else 1.0

    fixed = []
    for (p, q), lam in zip(cols, lams):
        f = sign_fix(p)
        fixed.append((f * p, f * q, lam))
    scale = max(lams, default=0.0) or 1.0
    fixed.sort(key=lambda c: (-round(abs(c[2]) / scale, 12), tuple(np.round(c[0], 12))))
    if residual is not None:
        residual = residual * sign_fix(residual)

    Q = np.zeros((d, d))
    lambdas = np.zeros(n)
    for k, (p, q, lam) in enumerate(fixed):
        Q[:, 2 * k], Q[:, 2 * k + 1], lambdas[k] = p, q, lam
    if residual is not None:
        Q[:, -1] = residual
    if np.linalg.det(Q) < 0:
        if residual is not None:
            Q[:, -1] *= -1.0
            residual = Q[:, -1].copy()
        else:
            Q[:, -1] *= -1.0
            lambdas[-1] *= -1.0
    return SkewSpectrum(lambdas, Q, residual)


def pfaffian(A) -> float:
    """Pfaffian by recursive expansion along the first row, ``pf([[0, a], [-a, 0]]) = a``."""
    A = _check_skew(A)
    m = A.shape[0]
    if m % 2:
        raise ValueError("Pfaffian needs an even dimension")
    return _pf(A)


def _pf(A: np.ndarray) -> float:
    m = A.shape[0]
    if m == 0:
        return 1.0
    if m == 2:
        return float(A[0, 1])
    total = 0.0
    for j in range(1, m):
        if A[0, j] == 0.0:
            continue
        keep = [i for i in range(1, m) if i != j]
        total += (-1.0) ** (j + 1) * A[0, j] * _pf(A[np.ix_(keep, keep)])
    return total


# -- shuffle decompositions --------------------------------------------------------

def _level_data(curve):
    """Displacement and signed-area matrix; exact for PL input."""
    if isinstance(curve, CurveFamily):
        return curve.displacement(), signed_area_matrix(curve)
    pl = as_polyline(curve)
    return pl.displacement(), signed_area_matrix(pl)


def _injection(P, d: int, parity: int) -> tuple:
    P = tuple(int(i) for i in P)
    k = len(P)
    if k % 2 != parity:
        raise ValueError(f"level k={k} has the wrong parity for this decomposition")
    if k > d:
        raise ValueError(f"level k={k} exceeds dimension {d}")
    if k > MAX_SUM_LEVEL:
        raise ValueError(f"permutation sums are limited to k <= {MAX_SUM_LEVEL}")
    if any(i < 1 or i > d for i in P) or any(a >= b for a, b in zip(P, P[1:])):
        raise ValueError("P must be strictly increasing 1-based indices into 1..d")
    return tuple(i - 1 for i in P)


def _even_sum(A: np.ndarray, idx: tuple) -> float:
    k = len(idx)
    if k == 0:
        return 1.0
    total = 0.0
    for tau in permutations(range(k)):
        prod = 1.0
        for r in range(0, k, 2):
            prod *= A[idx[tau[r]], idx[tau[r + 1]]]
        total += permutation_sign(tau) * prod
    return total * CONSTANTS["even_sum"](k)


def decompose_even(curve, P) -> float:
    """``alpha_P`` for even ``|P|`` as a signed sum over products of signed areas."""
    s, A = _level_data(curve)
    return _even_sum(A, _injection(P, len(s), 0))


def decompose_odd(curve, P) -> float:
    """``alpha_P`` for odd ``|P|``: expand in the displacement, recurse to even levels."""
    s, A = _level_data(curve)
    idx = _injection(P, len(s), 1)
    k = len(idx)
    total = 0.0
    for i in range(k):
        rest = idx[:i] + idx[i + 1:]
        total += (-1.0) ** i * s[idx[i]] * _even_sum(A, rest)
    return total * CONSTANTS["odd_step"](k)


def decompose_odd_full(curve, P) -> float:
    """``alpha_P`` for odd ``|P|`` as one signed sum over all permutations of ``P``."""
    s, A = _level_data(curve)
    idx = _injection(P, len(s), 1)
    k = len(idx)
    total = 0.0
    for tau in permutations(range(k)):
        prod = s[idx[tau[0]]]
        for r in range(1, k, 2):
            prod *= A[idx[tau[r]], idx[tau[r + 1]]]
        total += permutation_sign(tau) * prod
    return total * CONSTANTS["odd_sum"](k)


# -- odd-dimensional reduction ----------------------------------------------------

def _householder_to_last_axis(w: np.ndarray) -> np.ndarray:
    d = len(w)
    norm = np.linalg.norm(w)
    target = np.zeros(d)
    target[-1] = norm
    v = w - target
    if np.linalg.norm(v) <= 1e-15 * norm:
        return np.eye(d)
    v /= np.linalg.norm(v)
    R = np.eye(d) - 2.0 * np.outer(v, v)
    # R is a reflection (det -1) fixing the image of w; flip the first axis to land in SO(d)
    if d == 1:
        return np.eye(1)
    R[0, :] *= -1.0
    return R


def align_displacement(curve):
    """Rotate so the displacement points along the last axis.

    Returns ``(rotated, Q, length)`` with ``Q`` in ``SO(d)``,
    ``Q @ (x(1) - x(0)) = (0, ..., 0, length)`` and ``rotated`` the PL curve
    with vertices ``Q @ v``.

    Raises
    ------
    ValueError
        If the curve is closed (zero displacement).
    """
    pl = as_polyline(curve)
    w = pl.displacement()
    length = float(np.linalg.norm(w))
    if length == 0.0:
        raise ValueError("zero displacement: the odd reduction does not apply")
    Q = _householder_to_last_axis(w)
    return pl.transform(Q), Q, length


def reduced_signed_area(curve) -> tuple[np.ndarray, float]:
    """Signed-area matrix of the displacement-aligned curve with the last axis dropped.

    Returns ``(A_bar, length)``.
    """
    rotated, _, length = align_displacement(curve)
    return signed_area_matrix(rotated.project(range(rotated.dim - 1))), length


def alternating_via_eigenvalues(curve, d: int | None = None) -> float:
    """Signed ``alpha^(d)`` from the block spectrum of the (reduced) signed-area matrix."""
    pl = as_polyline(curve)
    d = pl.dim if d is None else int(d)
    if d != pl.dim:
        raise ValueError(f"curve dimension {pl.dim} != requested d={d}")
    if d % 2 == 0:
        spec = skew_spectrum(signed_area_matrix(pl))
        return CONSTANTS["volume_even"](d) * float(np.prod(spec.lambdas))
    if d == 1:
        return float(pl.displacement()[0])
    if np.linalg.norm(pl.displacement()) == 0.0:
        return 0.0
    A_bar, length = reduced_signed_area(pl)
    spec = skew_spectrum(A_bar)
    return CONSTANTS["volume_odd"](d) * length * float(np.prod(spec.lambdas))


def volume_via_eigenvalues(curve, d: int | None = None, n: int = 2000) -> float:
    """Hull volume of a cyclic curve as a product of planar signed areas.

    Parametric curves are discretized at ``n`` segments first. The result is
    ``|alpha^(d)|``: mirror-oriented cyclic curves have negative ``alpha``.
    """
    if isinstance(curve, CurveFamily):
        curve = discretize(curve, n)
    return abs(alternating_via_eigenvalues(curve, d))


def calibrate(n: int = 400, dims=(2, 3, 4)) -> dict:
    """Measure each prefactor as ``direct alpha / unnormalized expression`` on moment curves.

    Returns ``{(name, d): (measured, frozen, printed_or_None)}``.
    """
    out = {}
    for d in dims:
        pl = discretize(CurveFamily.moment(d), n)
        direct = pl_alternating(pl, d).value
        s, A = pl.displacement(), signed_area_matrix(pl)
        full = tuple(range(d))
        if d % 2 == 0:
            raw = _even_sum(A, full) / CONSTANTS["even_sum"](d)
            out[("even_sum", d)] = (direct / raw, CONSTANTS["even_sum"](d), None)
            lam = np.prod(skew_spectrum(A).lambdas)
            out[("volume_even", d)] = (direct / lam, CONSTANTS["volume_even"](d),
                                       PRINTED_CONSTANTS["volume_even"](d))
        else:
            total = 0.0
            for tau in permutations(range(d)):
                prod = s[full[tau[0]]]
                for r in range(1, d, 2):
                    prod *= A[full[tau[r]], full[tau[r + 1]]]
                total += permutation_sign(tau) * prod
            out[("odd_sum", d)] = (direct / total, CONSTANTS["odd_sum"](d), None)
            A_bar, length = reduced_signed_area(pl)
            reduced = pl_alternating(align_displacement(pl)[0].project(range(d - 1)), d - 1).value
            out[("reduction", d)] = (direct / (length * reduced), CONSTANTS["reduction"](d),
                                     PRINTED_CONSTANTS["reduction"](d))
            lam = np.prod(skew_spectrum(A_bar).lambdas)
            out[("volume_odd", d)] = (direct / (length * lam), CONSTANTS["volume_odd"](d),
                                      PRINTED_CONSTANTS["volume_odd"](d))
    return out
