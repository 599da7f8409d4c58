"""Determinant enumeration over ordered subsets of vectors.

Shared by the alternating-signature oracle and zonotope volumes. For vectors
``v_1..v_m`` in ``R^d`` and a row selection ``rows`` of size ``k`` this sums
``det(v_{i_1}[rows], ..., v_{i_k}[rows])`` (or its absolute value) over all
``i_1 < ... < i_k``.

The enumeration splits each ``k``-subset at its ``a``-th element and applies
the Laplace expansion along that column split, so each block of determinants is
one matrix product between ``a``-minors of the left columns and complementary
``b``-minors of the right columns. Block partial sums are reduced with numpy's
pairwise summation, and the reduction order depends only on the input shape.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np


@lru_cache(maxsize=None)
def combos(n: int, k: int) -> np.ndarray:
    """All increasing ``k``-subsets of ``range(n)`` in lexicographic order, shape ``(C(n,k), k)``."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.intp)
    out = np.fromiter((i for c in combinations(range(n), k) for i in c), dtype=np.intp)
    out = out.reshape(-1, k)
    out.setflags(write=False)
    return out


def minors(vectors: np.ndarray, subsets: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Minors of column subsets.

    ``vectors`` has shape ``(m, d)``; for every subset ``s`` (row of ``subsets``,
    size ``a``) and every ``a``-subset ``r`` of ``rows`` returns
    ``det(vectors[s][:, r].T)``. Shape ``(len(subsets), C(len(rows), a))``.
    """
    a = subsets.shape[1]
    row_sets = combos(len(rows), a)
    if a == 0:
        return np.ones((len(subsets), 1))
    cols = vectors[subsets]  # (N, a, d)
    sel = np.asarray(rows)[row_sets]  # (R, a)
    # blocks[N, R, a(row), a(col)]
    blocks = np.transpose(cols[:, :, sel], (0, 2, 3, 1))
    if a == 1:
        return blocks[..., 0, 0]
    if a == 2:
        return blocks[..., 0, 0] * blocks[..., 1, 1] - blocks[..., 0, 1] * blocks[..., 1, 0]
    return np.linalg.det(blocks)


def _laplace_signs(k: int, a: int) -> np.ndarray:
    # det M = sum_S (-1)^(sum(S) - a(a-1)/2) det(M[S, :a]) det(M[S^c, a:])
    row_sets = combos(k, a)
    return np.array([(-1.0) ** (int(s.sum()) - a * (a - 1) // 2) for s in row_sets])


def _complement_index(k: int, a: int) -> np.ndarray:
    left = combos(k, a)
    right = combos(k, k - a)
    lookup = {tuple(r): i for i, r in enumerate(right)}
    return np.array([lookup[tuple(sorted(set(range(k)) - set(s)))] for s in left], dtype=np.intp)


def subset_determinant_sum(vectors, rows=None, absolute: bool = False) -> float:
    """``sum_{i_1<...<i_k} det`` (or ``|det|``) of the ``rows``-restricted vectors.

    Zero vectors are dropped first; they contribute only zero determinants.
    """
    v = np.asarray(vectors, dtype=float)
    if v.ndim != 2:
        raise ValueError("vectors must have shape (m, d)")
    d = v.shape[1]
    rows = np.arange(d) if rows is None else np.asarray(rows, dtype=np.intp)
    k = len(rows)
    v = v[np.any(v[:, rows] != 0.0, axis=1)]
    m = v.shape[0]
    if k == 0:
        return 1.0
    if m < k:
        return 0.0
    if k == 1:
        x = v[:, rows[0]]
        return float(np.sum(np.abs(x) if absolute else x))

    a = k // 2
    b = k - a
    left_sets = combos(m, a)
    right_sets = combos(m, b)
    left = minors(v, left_sets, rows)
    right = minors(v, right_sets, rows)
    # fold Laplace signs and complement alignment into the right factor
    right = right[:, _complement_index(k, a)] * _laplace_signs(k, a)

    left_last = left_sets[:, -1]
    order = np.argsort(left_last, kind="stable")
    left, left_last = left[order], left_last[order]
    right_first = right_sets[:, 0]
    # lexicographic order: right subsets starting after j form a suffix
    start = np.searchsorted(right_first, np.arange(m), side="right")
    bounds = np.searchsorted(left_last, np.arange(m + 1), side="left")

    partial = np.zeros(m)
    for j in range(a - 1, m - b):
        lo, hi = bounds[j], bounds[j + 1]
        if lo == hi or start[j] >= len(right_sets):
            continue
        block = left[lo:hi] @ right[start[j]:].T
        partial[j] = np.sum(np.abs(block)) if absolute else np.sum(block)
    return float(np.sum(partial))
