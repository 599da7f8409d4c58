"""Command-line interface: ``sigvolume COMMAND [curve options] [output options]``.

Commands
--------
volume     alpha^(d) of the curve (PL formula, plus quadrature for smooth d <= 4)
compare    alpha^(d) against the geometric oracles, exit 1 on disagreement
classify   class certificates (torsion, strict determinant, d-order, relaxed)
zonoid     zonotope volume of the discretized derivative against d! * alpha^(d)
decompose  signed-area spectrum and the eigenvalue form of alpha^(d)
plotdata   curve traces, displacement-orthogonal projections, zonoid boundaries
subpath    alpha^(d) against exact hull volumes over a grid of sub-intervals

Exit codes: 0 success, 1 oracle disagreement, 2 usage error / malformed curve
file / unwritable output, 3 dimension mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .classify import classify_curve, parameter_grid
from .curve_model import (
    CurveDimensionError,
    CurveFamily,
    CurveFileError,
    PiecewiseLinearCurve,
    curve_from_dict,
    double_loop,
    load_curve,
)
from .cyclic_polytope import InputNotDOrder, cyclic_hull_volume, hull_volume_exact, hull_volume_montecarlo
from .decomposition import align_displacement, alternating_via_eigenvalues, reduced_signed_area, skew_spectrum
from .signature import MAX_QUADRATURE_DIM, alt_volume_quadrature, pl_alternating, signed_area_matrix
from .zonoid import moment_zonoid_boundary, zonotope_of_curve, zonotope_volume

BUILTINS = ("moment", "log", "circle2d", "circle3d_triple", "pl", "samples", "double_loop")
COMMANDS = ("volume", "compare", "classify", "zonoid", "decompose", "plotdata", "subpath")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DIM = 0, 1, 2, 3
MC_SIGMAS = 5.0


class UsageError(Exception):
    pass


# -- serialization --------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits; key order preserved."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(to_json(v, indent, _level + 1) for v in seq) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(str(obj))


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else
                    ("" if v is None else v) for v in r])
    return buf.getvalue()


def to_text(obj, _prefix: str = "") -> str:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{_prefix}{k}:")
                lines.append(to_text(v, _prefix + "  "))
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f"{_prefix}{k}:")
                for item in v:
                    lines.append(f"{_prefix}  - " + ", ".join(f"{a}={_scalar_text(b)}" for a, b in item.items()))
            else:
                lines.append(f"{_prefix}{k}: {_scalar_text(v)}")
    return "\n".join(lines)


def _scalar_text(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".10g")
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_scalar_text(x) for x in v) + "]"
    return "null" if v is None else str(v)


class Report:
    """Command result: a JSON-able dict, an optional CSV table and an exit code."""

    def __init__(self, data: dict, header=None, rows=None, code: int = EXIT_OK):
        self.data = data
        self.header = header
        self.rows = rows
        self.code = code

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return to_json(self.data) + "\n"
        if fmt == "csv":
            if self.header is None:
                flat = {k: v for k, v in self.data.items() if not isinstance(v, (dict, list))}
                return to_csv(list(flat), [list(flat.values())])
            return to_csv(self.header, self.rows)
        return to_text(self.data) + "\n"


# -- curve construction ---------------------------------------------------------------

def _parse_params(text):
    if text is None or text == "":
        return []
    try:
        return [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--params must be comma-separated numbers: {exc}") from exc


def build_curve(args):
    """Curve from ``--builtin`` or ``--curve``; raises CurveFileError / CurveDimensionError."""
    if args.curve:
        return load_curve(args.curve, dim=args.dim)
    name = args.builtin
    params = _parse_params(args.params)
    if name == "double_loop":
        curve = double_loop()
    elif name in ("pl", "samples"):
        if args.dim is None or not params or len(params) % args.dim:
            raise UsageError(f"--builtin {name} needs --dim and --params with a multiple of dim coordinates")
        return PiecewiseLinearCurve(np.reshape(params, (-1, args.dim)))
    else:
        spec = {"kind": name, "params": params}
        if name == "moment":
            if args.dim is None:
                raise UsageError("--builtin moment needs --dim")
            spec["dim"] = args.dim
        return curve_from_dict(spec, dim=args.dim)
    if args.dim is not None and curve.dim != args.dim:
        raise CurveDimensionError(f"curve has dim={curve.dim}, requested --dim {args.dim}")
    return curve


def _polyline(curve, n: int) -> PiecewiseLinearCurve:
    return curve.discretize(n) if isinstance(curve, CurveFamily) else curve


def _curve_label(args) -> str:
    return args.curve if args.curve else args.builtin


# -- commands -------------------------------------------------------------------------

def cmd_volume(curve, args) -> Report:
    pl = _polyline(curve, args.n)
    d = pl.dim
    data = {
        "curve": _curve_label(args),
        "d": d,
        "n": pl.n_segments,
        "method": "pl_determinant_sum",
        "alpha_d": pl_alternating(pl, d).value,
    }
    if isinstance(curve, CurveFamily) and d <= MAX_QUADRATURE_DIM:
        data["alpha_quadrature"] = alt_volume_quadrature(curve, d)
    return Report(data)


def _oracles(curve, pl, args) -> list:
    d = pl.dim
    rows = []

    def add(name, value, kind, applicable=True, note="", stderr=None):
        rows.append({"oracle": name, "value": value, "kind": kind, "applicable": applicable,
                     "stderr": stderr, "note": note})

    add("alpha_pl", pl_alternating(pl, d).value, "signed")
    if isinstance(curve, CurveFamily) and d <= MAX_QUADRATURE_DIM:
        add("alpha_quadrature", alt_volume_quadrature(curve, d), "signed")
    else:
        add("alpha_quadrature", None, "signed", False, "needs a parametric curve with d <= 4")
    try:
        add("cyclic_polytope", cyclic_hull_volume(pl.vertices), "volume")
    except InputNotDOrder as exc:
        add("cyclic_polytope", None, "volume", False, f"input not d-order, witness {list(exc.witness)}")
    if d in (2, 3):
        add("exact_hull", hull_volume_exact(pl.vertices), "volume")
    else:
        add("exact_hull", None, "volume", False, "exact hulls need d in {2, 3}")
    if args.trials > 0 and d <= 4:
        est, se = hull_volume_montecarlo(pl.vertices, trials=args.trials, seed=args.seed)
        add("monte_carlo", est, "volume", stderr=se)
    else:
        add("monte_carlo", None, "volume", False, "disabled (--trials 0) or d > 4")
    return rows


def cmd_compare(curve, args) -> Report:
    """Pairwise agreement of volume estimates.

    Signed alpha values enter as ``|alpha|`` (mirror-oriented cyclic curves have
    negative alpha). A pair involving Monte-Carlo may differ by up to
    ``max(tol, 5 * stderr)``.
    """
    pl = _polyline(curve, args.n)
    rows = _oracles(curve, pl, args)
    live = [r for r in rows if r["applicable"]]
    pairs = []
    ok_all = True
    for i, a in enumerate(live):
        for b in live[i + 1:]:
            va, vb = abs(a["value"]), abs(b["value"])
            se = max(a["stderr"] or 0.0, b["stderr"] or 0.0)
            limit = max(args.tol, MC_SIGMAS * se)
            diff = abs(va - vb)
            ok = diff <= limit
            ok_all &= ok
            pairs.append({"a": a["oracle"], "b": b["oracle"], "abs_diff": diff, "limit": limit, "agree": ok})
    data = {
        "curve": _curve_label(args),
        "d": pl.dim,
        "n": pl.n_segments,
        "tol": args.tol,
        "oracles": rows,
        "pairs": pairs,
        "agree": ok_all,
    }
    header = ["oracle", "value", "applicable", "stderr", "note"]
    table = [[r["oracle"], r["value"], str(r["applicable"]).lower(), r["stderr"], r["note"]] for r in rows]
    return Report(data, header, table, EXIT_OK if ok_all else EXIT_MISMATCH)


def _parse_grid(text, default):
    if text is None:
        return default
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return int(parts[0])
        return parameter_grid(np.array([float(p) for p in parts]))
    except ValueError as exc:
        raise UsageError(f"--grid must be an integer or increasing comma-separated parameters: {exc}") from exc


def cmd_classify(curve, args) -> Report:
    if isinstance(curve, CurveFamily) and args.n < 1:
        raise UsageError("--n must be >= 1")
    report = classify_curve(curve, det_grid=_parse_grid(args.grid, 51))
    data = {"curve": _curve_label(args), "d": curve.dim}
    data.update(report.to_dict())
    header = ["class", "status", "witness", "min_det"]
    rows = []
    for name in ("torsion", "strict_det", "d_order", "cyclic_relaxed"):
        t = getattr(report, name)
        w = "" if t.witness is None else " ".join(_fmt_float(float(x)) for x in t.witness)
        rows.append([name, t.status, w, t.min_det])
    return Report(data, header, rows)


def cmd_zonoid(curve, args) -> Report:
    pl = _polyline(curve, args.n)
    d = pl.dim
    z = zonotope_of_curve(pl)
    vol = zonotope_volume(z)
    alpha = pl_alternating(pl, d).value
    data = {
        "curve": _curve_label(args),
        "d": d,
        "n": pl.n_segments,
        "n_generators": len(z),
        "zonotope_volume": vol,
        "d_factorial_alpha": math.factorial(d) * alpha,
        "abs_diff": abs(vol - math.factorial(d) * abs(alpha)),
    }
    header = [f"g{i + 1}" for i in range(d)]
    return Report(data, header, [list(map(float, g)) for g in z.generators])


def cmd_decompose(curve, args) -> Report:
    pl = _polyline(curve, args.n)
    d = pl.dim
    A = signed_area_matrix(pl)
    spec = skew_spectrum(A)
    data = {
        "curve": _curve_label(args),
        "d": d,
        "n": pl.n_segments,
        "displacement": [float(x) for x in pl.displacement()],
        "signed_area_matrix": [[float(x) for x in row] for row in A],
        "lambdas": [float(x) for x in spec.lambdas],
        "Q": [[float(x) for x in row] for row in spec.Q],
        "alpha_pl": pl_alternating(pl, d).value,
    }
    if d % 2 and np.linalg.norm(pl.displacement()) > 0 and d > 1:
        A_bar, length = reduced_signed_area(pl)
        data["displacement_length"] = length
        data["reduced_lambdas"] = [float(x) for x in skew_spectrum(A_bar).lambdas]
    data["alpha_eigen"] = alternating_via_eigenvalues(pl)
    data["volume_eigen"] = abs(data["alpha_eigen"])
    return Report(data)


def cmd_plotdata(curve, args) -> Report:
    rows_n = args.n
    what = args.what
    if what == "trace":
        t = np.linspace(0.0, 1.0, rows_n)
        X = curve.point(t)
        header = ["t"] + [f"x{i + 1}" for i in range(X.shape[1])]
        rows = [[float(a)] + [float(v) for v in x] for a, x in zip(t, X)]
    elif what == "projection":
        t = np.linspace(0.0, 1.0, rows_n)
        pts = PiecewiseLinearCurve(curve.point(t))
        if pts.dim % 2 == 0:
            raise UsageError("projection along the displacement is defined for odd d")
        try:
            rotated, _, _ = align_displacement(pts)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        U = rotated.vertices[:, :-1] - rotated.vertices[0, :-1]
        header = ["t"] + [f"u{i + 1}" for i in range(U.shape[1])]
        rows = [[float(a)] + [float(v) for v in u] for a, u in zip(t, U)]
    else:  # zonoid-boundary
        if not (isinstance(curve, CurveFamily) and curve.kind == "moment" and curve.dim == 2):
            raise UsageError("zonoid boundary data is available for the planar moment curve")
        B = moment_zonoid_boundary(rows_n)
        header = ["x", "y"]
        rows = [[float(a), float(b)] for a, b in B]
    data = {"curve": _curve_label(args), "what": what, "columns": header, "rows": rows}
    return Report(data, header, rows)


def cmd_subpath(curve, args) -> Report:
    grid = int(args.grid) if args.grid is not None else 10
    if grid < 3:
        raise UsageError("--grid must be >= 3 for subpath scans")
    d = curve.dim
    if d not in (2, 3):
        raise UsageError("subpath scans compare against exact hulls, d in {2, 3}")
    knots = np.arange(grid + 1) / grid
    worst = {"a": None, "b": None, "abs_diff": -1.0, "alpha": None, "hull": None}
    rows = []
    for i in range(grid + 1):
        for j in range(i + 1, grid + 1):
            a, b = float(knots[i]), float(knots[j])
            sub = _polyline(curve.restrict(a, b), args.n)
            alpha = pl_alternating(sub, d).value
            pts = sub.vertices
            hull = hull_volume_exact(pts) if len(pts) >= d + 1 else 0.0
            diff = abs(hull - abs(alpha))
            rows.append([a, b, alpha, hull, diff])
            if diff > worst["abs_diff"]:
                worst = {"a": a, "b": b, "abs_diff": diff, "alpha": alpha, "hull": hull}
    ok = worst["abs_diff"] <= args.tol
    data = {
        "curve": _curve_label(args),
        "d": d,
        "grid": grid,
        "tol": args.tol,
        "windows": len(rows),
        "max_abs_diff": worst["abs_diff"],
        "worst_window": worst,
        "within_tol": ok,
    }
    return Report(data, ["a", "b", "alpha", "hull", "abs_diff"], rows, EXIT_OK if ok else EXIT_MISMATCH)


HANDLERS = {
    "volume": cmd_volume,
    "compare": cmd_compare,
    "classify": cmd_classify,
    "zonoid": cmd_zonoid,
    "decompose": cmd_decompose,
    "plotdata": cmd_plotdata,
    "subpath": cmd_subpath,
}
DEFAULT_N = {"plotdata": 200}


# -- entry point ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sigvolume", description="Convex hull volumes of curves via alternating signatures.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=BUILTINS, help="named curve family")
    src.add_argument("--curve", metavar="FILE", help="JSON curve definition")
    p.add_argument("--dim", type=int, help="ambient dimension")
    p.add_argument("--params", help="comma-separated parameters (log weights, or flat vertices for pl)")
    p.add_argument("--n", type=int, help="segments for discretization (rows for plotdata)")
    p.add_argument("--seed", type=int, default=0, help="Monte-Carlo seed")
    p.add_argument("--trials", type=int, default=1_000_000, help="Monte-Carlo samples, 0 disables")
    p.add_argument("--tol", type=float, default=1e-6, help="agreement tolerance")
    p.add_argument("--grid", help="classify: strict-determinant grid (count or parameters); subpath: windows")
    p.add_argument("--what", choices=("trace", "projection", "zonoid-boundary"), default="trace",
                   help="plotdata series")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None,
                   help="output format (text by default, csv for plotdata)")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n is None:
        args.n = DEFAULT_N.get(args.command, 2000)
    if args.n < 1:
        parser.error("--n must be >= 1")
    if not args.tol > 0:
        parser.error("--tol must be > 0")
    if args.seed < 0 or args.seed >= 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.trials and args.trials < 10_000:
        parser.error("--trials must be 0 or >= 10000")
    fmt = args.format or ("csv" if args.command == "plotdata" else "text")
    try:
        curve = build_curve(args)
        report = HANDLERS[args.command](curve, args)
    except UsageError as exc:
        print(f"sigvolume: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CurveDimensionError as exc:
        print(f"sigvolume: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIM
    except CurveFileError as exc:
        print(f"sigvolume: bad curve definition: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(fmt)
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"sigvolume: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return report.code


if __name__ == "__main__":
    sys.exit(main())
