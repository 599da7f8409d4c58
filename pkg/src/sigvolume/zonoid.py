"""Zonotopes generated by the segments of a piecewise-linear curve.

For a PL curve with increments ``dx_i`` the zonoid of its derivative is the
zonotope ``sum_i [-dx_i / 2, dx_i / 2]``. Its volume is
``2^d * sum_{i_1<...<i_d} |det(g_{i_1}, ..., g_{i_d})|``, which for a cyclic
curve equals ``d! * alpha^(d)`` (every determinant has the same sign).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import subset_determinant_sum
from .curve_model import as_polyline

__all__ = [
    "Zonotope",
    "zonotope_of_curve",
    "support",
    "zonotope_volume",
    "membership_2d_moment_zonoid",
    "moment_zonoid_inequalities",
    "moment_zonoid_boundary",
]


@dataclass(frozen=True, eq=False)
class Zonotope:
    """Centrally symmetric Minkowski sum of segments ``[-g_i, g_i]``."""

    generators: np.ndarray  # (m, d)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def __len__(self):
        return self.generators.shape[0]


def zonotope_of_curve(curve) -> Zonotope:
    """Zonotope with generators ``dx_i / 2``; zero-length segments are dropped."""
    dx = as_polyline(curve).increments
    g = dx[np.any(dx != 0.0, axis=1)] / 2.0
    if len(g) == 0:
        raise ValueError("curve has no nonzero segment")
    g.setflags(write=False)
    return Zonotope(g)


def support(z: Zonotope, u) -> float:
    """Support function ``h(u) = sum_i |<u, g_i>|``."""
    u = np.asarray(u, dtype=float)
    if u.shape != (z.dim,):
        raise ValueError(f"direction must have shape ({z.dim},)")
    return float(np.sum(np.abs(z.generators @ u)))


def zonotope_volume(z: Zonotope) -> float:
    """``2^d * sum |det|`` over all ``d``-subsets of generators; 0 with fewer than ``d``."""
    d = z.dim
    if len(z) < d:
        return 0.0
    return 2.0 ** d * subset_determinant_sum(z.generators, absolute=True)


def moment_zonoid_inequalities(p) -> tuple[float, float]:
    """Both defining polynomials of the zonoid of the planar moment curve's derivative.

    The point lies in the zonoid iff both values are ``>= 0``.
    """
    x, y = (float(c) for c in p)
    return (-4 * x * x + 4 * x - 4 * y + 1, -4 * x * x - 4 * x + 4 * y + 1)


def membership_2d_moment_zonoid(p) -> bool:
    a, b = moment_zonoid_inequalities(p)
    return a >= 0.0 and b >= 0.0


def moment_zonoid_boundary(n: int = 200) -> np.ndarray:
    """Closed boundary trace, counter-clockwise from ``(-1/2, -1/2)``.

    The lower arc is ``y = x^2 + x - 1/4`` and the upper arc ``y = -x^2 + x + 1/4``,
    both for ``x`` in ``[-1/2, 1/2]``; they meet at ``(-1/2, -1/2)`` and ``(1/2, 1/2)``.
    Returns ``2n + 1`` rows, the last equal to the first.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.linspace(-0.5, 0.5, n + 1)
    lower = np.column_stack([x, x * x + x - 0.25])
    xr = x[::-1]
    upper = np.column_stack([xr, -xr * xr + xr + 0.25])
    return np.vstack([lower, upper[1:]])
