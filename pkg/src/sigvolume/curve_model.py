"""Curve representations: piecewise-linear paths and parametric families on [0, 1].

Two types carry all curve data in the package:

* :class:`PiecewiseLinearCurve` -- an ordered vertex list, parametrized uniformly
  (vertex ``k`` of ``m`` segments sits at ``t = k / m``).
* :class:`CurveFamily` -- a parametric curve with point and derivative
  evaluation (moment, log, circles, polynomial, custom callables).

Both are immutable after construction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "PiecewiseLinearCurve",
    "CurveFamily",
    "CurveFileError",
    "CurveDimensionError",
    "discretize",
    "displacement",
    "restrict",
    "as_polyline",
    "load_curve",
    "curve_from_dict",
    "double_loop",
    "arc_with_tails",
]

BUILTIN_KINDS = ("moment", "log", "circle2d", "circle3d_triple", "pl", "samples")
FD_STEP = 1e-6


class CurveFileError(ValueError):
    """Malformed curve definition."""


class CurveDimensionError(ValueError):
    """Curve data disagrees with the requested or declared dimension."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PiecewiseLinearCurve:
    """Polygonal path through ``vertices`` (shape ``(m + 1, d)``).

    Zero-length segments are kept; consumers that enumerate determinants skip
    them since they contribute nothing.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise CurveDimensionError("vertices must be a 2-D array (points x dim)")
        if v.shape[0] < 2:
            raise ValueError("a piecewise-linear curve needs at least 2 vertices")
        if v.shape[1] < 1:
            raise CurveDimensionError("dimension must be >= 1")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        object.__setattr__(self, "vertices", _readonly(v))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_segments(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def increments(self) -> np.ndarray:
        """Segment displacements ``v[i+1] - v[i]``, shape ``(m, d)``."""
        return np.diff(self.vertices, axis=0)

    @property
    def is_closed(self) -> bool:
        return bool(np.array_equal(self.vertices[0], self.vertices[-1]))

    def displacement(self) -> np.ndarray:
        return self.vertices[-1] - self.vertices[0]

    def point(self, t):
        t = np.asarray(t, dtype=float)
        m = self.n_segments
        s = np.clip(t, 0.0, 1.0) * m
        k = np.minimum(np.floor(s).astype(int), m - 1)
        frac = (s - k)[..., None]
        return self.vertices[k] + frac * (self.vertices[k + 1] - self.vertices[k])

    def derivative(self, t, order: int = 1):
        """Piecewise-constant velocity (right-continuous); higher orders vanish a.e."""
        if order == 0:
            return self.point(t)
        t = np.asarray(t, dtype=float)
        if order > 1:
            return np.zeros(t.shape + (self.dim,))
        m = self.n_segments
        k = np.minimum(np.floor(np.clip(t, 0.0, 1.0) * m).astype(int), m - 1)
        return m * self.increments[k]

    def has_exact_derivative(self, order: int) -> bool:
        return True

    def restrict(self, a: float, b: float) -> "PiecewiseLinearCurve":
        """Sub-path on ``[a, b]``, reparametrized to ``[0, 1]``.

        The result keeps every original vertex strictly inside ``(a, b)``.
        """
        _check_interval(a, b)
        m = self.n_segments
        inner = [k for k in range(1, m) if a < k / m < b]
        pts = [self.point(a)] + [self.vertices[k] for k in inner] + [self.point(b)]
        return PiecewiseLinearCurve(np.array(pts))

    def transform(self, matrix) -> "PiecewiseLinearCurve":
        """Apply the linear map ``matrix`` to every vertex."""
        return PiecewiseLinearCurve(self.vertices @ np.asarray(matrix, dtype=float).T)

    def reversed(self) -> "PiecewiseLinearCurve":
        return PiecewiseLinearCurve(self.vertices[::-1])

    def project(self, coords: Sequence[int]) -> "PiecewiseLinearCurve":
        return PiecewiseLinearCurve(self.vertices[:, list(coords)])

    def __repr__(self):
        return f"PiecewiseLinearCurve(dim={self.dim}, n_segments={self.n_segments})"


def _check_interval(a, b):
    if not (0.0 <= a < b <= 1.0):
        raise ValueError(f"need 0 <= a < b <= 1, got a={a}, b={b}")


# -- builtin evaluators -------------------------------------------------------
# Each returns the ``order``-th derivative (order 0 is the point) at array t.

def _moment(d, order, t):
    out = np.zeros(t.shape + (d,))
    for i in range(1, d + 1):
        if order <= i:
            coef = math.factorial(i) / math.factorial(i - order)
            out[..., i - 1] = coef * t ** (i - order)
    return out


def _log(a, order, t):
    a = np.asarray(a, dtype=float)
    at = 1.0 + np.multiply.outer(t, a)
    if order == 0:
        return np.log(at)
    sign = (-1.0) ** (order - 1)
    return sign * math.factorial(order - 1) * a**order / at**order


def _trig(freq, phase_cos, order, t):
    # derivative of cos(w t) (phase_cos=True) or sin(w t)
    w = 2.0 * math.pi * freq
    arg = w * t + order * math.pi / 2.0
    return w**order * (np.cos(arg) if phase_cos else np.sin(arg))


def _circle2d(order, t):
    return np.stack([_trig(1, True, order, t), _trig(1, False, order, t)], axis=-1)


def _circle3d_triple(order, t):
    return np.stack(
        [_trig(1, True, order, t), _trig(1, False, order, t), _trig(3, True, order, t)],
        axis=-1,
    )


def _polynomial(coeffs, order, t):
    cols = []
    for c in coeffs:
        p = np.polynomial.Polynomial(c)
        cols.append(p.deriv(order)(t) if order else p(t))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True, eq=False)
class CurveFamily:
    """Parametric curve ``x: [0, 1] -> R^d``.

    Use the constructors :meth:`moment`, :meth:`log`, :meth:`circle2d`,
    :meth:`circle3d_triple`, :meth:`polynomial` and :meth:`custom`.
    ``interval`` records a restriction ``t -> x(a + t (b - a))`` of the base
    curve; it is ``(0, 1)`` for unrestricted curves.
    """

    kind: str
    dim: int
    params: tuple = ()
    interval: tuple = (0.0, 1.0)
    point_fn: Callable | None = field(default=None, repr=False)
    derivative_fns: tuple = field(default=(), repr=False)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def moment(cls, d: int) -> "CurveFamily":
        if d < 1:
            raise ValueError("moment curve needs d >= 1")
        return cls("moment", int(d))

    @classmethod
    def log(cls, *a: float) -> "CurveFamily":
        a = tuple(float(x) for x in a)
        if not a:
            raise ValueError("log curve needs at least one parameter")
        if any(x < 0 for x in a) or len(set(a)) != len(a):
            raise ValueError("log-curve parameters must be distinct and non-negative")
        return cls("log", len(a), a)

    @classmethod
    def circle2d(cls) -> "CurveFamily":
        return cls("circle2d", 2)

    @classmethod
    def circle3d_triple(cls) -> "CurveFamily":
        return cls("circle3d_triple", 3)

    @classmethod
    def polynomial(cls, coeffs: Sequence[Sequence[float]]) -> "CurveFamily":
        """One ascending-power coefficient list per coordinate."""
        coeffs = tuple(tuple(float(c) for c in row) for row in coeffs)
        if not coeffs or any(len(r) == 0 for r in coeffs):
            raise ValueError("polynomial curve needs non-empty coefficient rows")
        return cls("polynomial", len(coeffs), coeffs)

    @classmethod
    def custom(cls, point: Callable, derivatives: Sequence[Callable] = (), *, dim: int | None = None,
               check: bool = True) -> "CurveFamily":
        """Curve from user callables.

        ``point(t)`` maps an array of parameters of shape ``s`` to shape ``s + (d,)``;
        ``derivatives[k]`` is the ``(k + 1)``-th derivative with the same
        signature. Missing derivatives fall back to central differences.
        The first derivative, if given, is checked against central differences.
        """
        probe = np.asarray(point(np.array([0.5])), dtype=float)
        d = probe.shape[-1] if dim is None else int(dim)
        if probe.shape != (1, d):
            raise CurveDimensionError(f"point function returned shape {probe.shape}, expected (1, {d})")
        fam = cls("custom", d, (), (0.0, 1.0), point, tuple(derivatives))
        if check and derivatives:
            _check_derivative(fam)
        return fam

    # -- evaluation -----------------------------------------------------------
    def _base(self, order: int, t: np.ndarray) -> np.ndarray:
        k = self.kind
        if k == "moment":
            return _moment(self.dim, order, t)
        if k == "log":
            return _log(self.params, order, t)
        if k == "circle2d":
            return _circle2d(order, t)
        if k == "circle3d_triple":
            return _circle3d_triple(order, t)
        if k == "polynomial":
            return _polynomial(self.params, order, t)
        if k == "custom":
            if order == 0:
                return np.asarray(self.point_fn(t), dtype=float)
            if order <= len(self.derivative_fns):
                return np.asarray(self.derivative_fns[order - 1](t), dtype=float)
            return _central_difference(lambda s: self._base(order - 1, s), t)
        raise ValueError(f"unknown curve kind {k!r}")

    def point(self, t):
        """Point(s) ``x(t)``; ``t`` scalar or array, result shape ``t.shape + (d,)``."""
        return self.derivative(t, 0)

    def derivative(self, t, order: int = 1):
        t = np.asarray(t, dtype=float)
        a, b = self.interval
        return (b - a) ** order * self._base(order, a + t * (b - a))

    def has_exact_derivative(self, order: int) -> bool:
        if self.kind != "custom":
            return True
        return order <= len(self.derivative_fns)

    def displacement(self) -> np.ndarray:
        return self.point(1.0) - self.point(0.0)

    def discretize(self, n: int) -> PiecewiseLinearCurve:
        """PL curve through ``x(k / n)``, ``k = 0..n``."""
        if n < 1:
            raise ValueError("n must be >= 1")
        t = np.arange(n + 1) / n
        pts = self.point(t)
        # exact endpoints regardless of rounding in t
        pts[0] = self.point(0.0)
        pts[-1] = self.point(1.0)
        return PiecewiseLinearCurve(pts)

    def restrict(self, a: float, b: float) -> "CurveFamily":
        _check_interval(a, b)
        lo, hi = self.interval
        w = hi - lo
        return CurveFamily(self.kind, self.dim, self.params, (lo + a * w, lo + b * w),
                           self.point_fn, self.derivative_fns)

    def __repr__(self):
        extra = f", params={self.params}" if self.params and self.kind != "polynomial" else ""
        iv = "" if self.interval == (0.0, 1.0) else f", interval={self.interval}"
        return f"CurveFamily({self.kind!r}, dim={self.dim}{extra}{iv})"


def _central_difference(f, t, h=FD_STEP):
    return (f(t + h) - f(t - h)) / (2.0 * h)


def _check_derivative(curve: CurveFamily, n_probe: int = 5, h: float = 1e-5, rtol: float = 1e-6):
    rng = np.random.default_rng(0)
    t = rng.uniform(0.05, 0.95, n_probe)
    exact = curve.derivative(t, 1)
    fd = (curve.point(t + h) - curve.point(t - h)) / (2 * h)
    err = np.linalg.norm(fd - exact, axis=-1)
    scale = np.maximum(np.linalg.norm(exact, axis=-1), 1.0)
    if np.any(err > rtol * scale):
        raise ValueError("derivative function is inconsistent with the point function")


# -- functional surface ---------------------------------------------------------

def discretize(curve: CurveFamily, n: int) -> PiecewiseLinearCurve:
    return curve.discretize(n)


def displacement(curve) -> np.ndarray:
    """``x(1) - x(0)``."""
    return curve.displacement()


def restrict(curve, a: float, b: float):
    return curve.restrict(a, b)


def as_polyline(curve, n: int = 2000) -> PiecewiseLinearCurve:
    """PL curves pass through; families are discretized with ``n`` segments."""
    if isinstance(curve, PiecewiseLinearCurve):
        return curve
    if isinstance(curve, CurveFamily):
        return curve.discretize(n)
    return PiecewiseLinearCurve(np.asarray(curve, dtype=float))


# -- fixtures from the literature ------------------------------------------------

def double_loop() -> PiecewiseLinearCurve:
    """Closed double loop: a 3x2 inner cycle, then the notched 5x6 outer loop."""
    return PiecewiseLinearCurve(np.array([
        (0, 0), (3, 0), (3, 2), (0, 2), (0, 0),
        (3, 0), (5, 0), (5, 6), (4, 6), (4, 4), (1, 4), (1, 6), (0, 6), (0, 0),
    ], dtype=float))


def arc_with_tails(n_arc: int = 50) -> PiecewiseLinearCurve:
    """Segment, quarter arc in the plane ``x3 = 1/2``, segment (cyclic, not d-order)."""
    t = np.linspace(0.0, 0.25, n_arc)
    arc = np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t), np.full_like(t, 0.5)], axis=1)
    arc[-1] = (0.0, 1.0, 0.5)
    return PiecewiseLinearCurve(np.vstack([[0.0, 0.0, 0.0], arc, [0.0, 0.0, 1.5]]))


# -- curve-definition files ------------------------------------------------------

def curve_from_dict(spec: dict, dim: int | None = None):
    """Build a curve from the JSON curve-definition schema.

    ``{"kind": ..., "dim": int, "params": [...], "vertices": [[...], ...]}``.
    ``pl`` and ``samples`` yield a :class:`PiecewiseLinearCurve`; other kinds a
    :class:`CurveFamily`. ``polynomial`` takes one coefficient row per coordinate
    in ``params``.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise CurveFileError("curve definition must be an object with a 'kind' field")
    kind = spec["kind"]
    declared = spec.get("dim")
    if declared is not None and dim is not None and int(declared) != int(dim):
        raise CurveDimensionError(f"file declares dim={declared}, requested dim={dim}")
    want = dim if dim is not None else declared
    params = spec.get("params") or []
    try:
        if kind == "moment":
            if want is None:
                raise CurveFileError("moment curve needs 'dim'")
            curve = CurveFamily.moment(int(want))
        elif kind == "log":
            curve = CurveFamily.log(*[float(p) for p in params])
        elif kind == "circle2d":
            curve = CurveFamily.circle2d()
        elif kind == "circle3d_triple":
            curve = CurveFamily.circle3d_triple()
        elif kind == "polynomial":
            curve = CurveFamily.polynomial(params)
        elif kind in ("pl", "samples"):
            verts = spec.get("vertices")
            if not isinstance(verts, list) or not verts:
                raise CurveFileError(f"'{kind}' curve needs a non-empty 'vertices' list")
            lengths = {len(r) if isinstance(r, list) else -1 for r in verts}
            if len(lengths) != 1 or -1 in lengths:
                raise CurveDimensionError("vertex rows have inconsistent dimension")
            curve = PiecewiseLinearCurve(np.array(verts, dtype=float))
        else:
            raise CurveFileError(f"unknown curve kind {kind!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (CurveFileError, CurveDimensionError)):
            raise
        raise CurveFileError(str(exc)) from exc
    if want is not None and curve.dim != int(want):
        raise CurveDimensionError(f"curve has dim={curve.dim}, expected {want}")
    return curve


def load_curve(path, dim: int | None = None):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise CurveFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CurveFileError(f"invalid JSON in {path}: {exc}") from exc
    return curve_from_dict(spec, dim=dim)
