"""Acceptance criteria, one ``criterion`` marker per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""
import json
import math
import time

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from _helpers import random_pl, random_rotation
from sigvolume.classify import classify_curve, cyclic_relaxed_test, strict_det_test
from sigvolume.cli import main
from sigvolume.curve_model import CurveFamily, PiecewiseLinearCurve, discretize, double_loop
from sigvolume.cyclic_polytope import (
    bordered_determinants,
    cyclic_hull_volume,
    gale_index_set,
    hull_volume_exact,
    simplex_volume_signed,
)
from sigvolume.decomposition import (
    decompose_even,
    decompose_odd,
    decompose_odd_full,
    reduced_signed_area,
    skew_spectrum,
    volume_via_eigenvalues,
)
from sigvolume.signature import alt, alt_volume_quadrature, pl_alternating, pl_signature
from sigvolume.zonoid import zonotope_of_curve, zonotope_volume

QUARTIC = CurveFamily.polynomial([[0, 1], [0.0625, -0.5, 1.5, -2, 1]])


def note(record, text):
    record("detail", text)


@pytest.fixture(scope="module")
def moment3_pl():
    return discretize(CurveFamily.moment(3), 2000)


@pytest.mark.criterion(1, "moment(3) volume: PL, quadrature and cyclic oracle agree near 1/180")
def test_moment_curve_volume(tmp_path, record_property):
    out = tmp_path / "compare.json"
    start = time.perf_counter()
    main(["compare", "--builtin", "moment", "--dim", "3", "--n", "2000", "--format", "json", "--out", str(out)])
    elapsed = time.perf_counter() - start
    rep = json.loads(out.read_text())
    vals = {r["oracle"]: r["value"] for r in rep["oracles"] if r["applicable"]}
    trio = [vals["alpha_pl"], vals["alpha_quadrature"], vals["cyclic_polytope"]]
    spread = max(trio) - min(trio)
    worst = max(abs(v - 1 / 180) for v in trio)
    note(record_property, f"spread={spread:.2e} max|v-1/180|={worst:.2e} runtime={elapsed:.1f}s")
    assert spread <= 1e-4
    assert worst <= 2e-4
    assert elapsed <= 60


@pytest.mark.criterion(2, "eigenvalue pipeline on moment(3): lambda_1 and eigen volume")
def test_eigen_volume_matches_pl(moment3_pl, record_property):
    direct = pl_alternating(moment3_pl, 3).value
    eig = volume_via_eigenvalues(moment3_pl)
    note(record_property, f"|eigen - alpha_pl|={abs(eig - direct):.2e}")
    assert abs(eig - direct) <= 1e-6


@pytest.mark.criterion(2, "eigenvalue pipeline on moment(3): lambda_1 and eigen volume")
def test_reduced_lambda_reference_value(moment3_pl, record_property):
    A_bar, _ = reduced_signed_area(moment3_pl)
    lam = abs(skew_spectrum(A_bar).lambdas[0])
    target = 1 / (30 * math.sqrt(3))
    note(record_property, f"lambda_1={lam:.7f} target={target:.7f} (measured equals 1/(60*sqrt(3)))")
    assert abs(lam - target) <= 1e-6


@pytest.mark.criterion(3, "zonoid identity on moment(2)")
def test_zonoid_identity(record_property):
    pl = discretize(CurveFamily.moment(2), 2000)
    vol = zonotope_volume(zonotope_of_curve(pl))
    alpha = pl_alternating(pl, 2).value
    note(record_property, f"vol={vol:.10f} |vol-2alpha|={abs(vol - 2 * alpha):.1e}")
    assert abs(vol - 1 / 3) <= 1e-5
    assert abs(vol - 2 * alpha) <= 1e-8


@pytest.mark.criterion(4, "circle3d_triple: alpha vanishes while the hull has volume")
def test_counterexample(record_property):
    c = CurveFamily.circle3d_triple()
    alpha = alt_volume_quadrature(c)
    v2000 = hull_volume_exact(c.point(np.linspace(0, 1, 2000)))
    v4000 = hull_volume_exact(c.point(np.linspace(0, 1, 4000)))
    note(record_property, f"|alpha|={abs(alpha):.1e} hull(2000)={v2000:.6f} hull(4000)={v4000:.6f}")
    assert abs(alpha) <= 1e-6
    assert v2000 > 0.5
    assert abs(v4000 - v2000) <= 0.01 * v2000


@pytest.mark.criterion(5, "double loop: alpha = hull area = 30, relaxed cyclic test fails")
def test_double_loop(record_property):
    pl = double_loop()
    alpha = pl_alternating(pl, 2).value
    hull = hull_volume_exact(pl.vertices)
    res = cyclic_relaxed_test(pl.vertices, 2)
    det = bordered_determinants(pl.vertices, np.array([res.witness]))[0]
    note(record_property, f"alpha={alpha} hull={hull} witness={list(res.witness)} det={det}")
    assert abs(alpha - 30) <= 1e-10 and abs(hull - 30) <= 1e-10
    assert res.status == "fails" and det < 0


@pytest.mark.criterion(6, "classification table")
def test_classification_table(record_property):
    circle = classify_curve(CurveFamily.circle2d())
    circle_sdet = strict_det_test(CurveFamily.circle2d(), grid=[0.25, 0.5, 0.75])
    assert circle.d_order.status == "holds"
    assert circle_sdet.status == "fails" and circle_sdet.witness == (0.25, 0.75)

    quartic = classify_curve(QUARTIC)
    assert quartic.strict_det.status == "holds"
    assert quartic.torsion.status == "fails" and abs(quartic.torsion.witness[0] - 0.5) <= 0.02

    for d in (2, 3, 4):
        rep = classify_curve(CurveFamily.moment(d))
        for name in ("torsion", "strict_det", "d_order", "cyclic_relaxed"):
            assert getattr(rep, name).status == "holds", (d, name)

    log = classify_curve(CurveFamily.log(1, 2, 3))
    for name in ("strict_det", "d_order", "cyclic_relaxed"):
        assert getattr(log, name).status == "holds", name
    note(record_property, f"log(1,2,3) orientation={log.d_order.orientation} torsion={log.torsion.status}")


PROPERTY = "property suites: oracle equivalences"


@pytest.mark.criterion(7, PROPERTY)
def test_property_a_tensor_route(record_property):
    rng = np.random.default_rng(7001)
    worst = 0.0
    for i in range(100):
        d = 1 + i % 5
        pl = PiecewiseLinearCurve(random_pl(rng, 2 + i % 7, d))
        for k in range(1, d + 1):
            worst = max(worst, np.max(np.abs(pl_alternating(pl, k).data - alt(pl_signature(pl, k)[k]).data)))
    note(record_property, f"(a) {worst:.1e}")
    assert worst <= 1e-11


@pytest.mark.criterion(7, PROPERTY)
def test_property_b_rotation_invariance(record_property):
    rng = np.random.default_rng(7002)
    worst = 0.0
    for i in range(20):
        d = 2 + i % 4
        V = random_pl(rng, 8, d)
        Q = random_rotation(rng, d)
        a = pl_alternating(PiecewiseLinearCurve(V), d).value
        b = pl_alternating(PiecewiseLinearCurve(V @ Q.T), d).value
        worst = max(worst, abs(a - b))
    note(record_property, f"(b) {worst:.1e}")
    assert worst <= 1e-10


@pytest.mark.criterion(7, PROPERTY)
def test_property_c_closed_odd_curves(record_property):
    rng = np.random.default_rng(7003)
    worst = 0.0
    for i in range(50):
        d = (1, 3, 5)[i % 3]
        V = random_pl(rng, 3 + i % 6, d)
        V = np.vstack([V, V[:1]])
        worst = max(worst, abs(pl_alternating(PiecewiseLinearCurve(V), d).value))
    note(record_property, f"(c) {worst:.1e}")
    assert worst <= 1e-12


@pytest.mark.criterion(7, PROPERTY)
def test_property_d_gale_partition(record_property):
    rng = np.random.default_rng(7004)
    worst = 0.0
    for d in (2, 3):
        for n in range(d, 12):
            t = np.sort(rng.uniform(0, 1, n + 1))
            P = t[:, None] ** np.arange(1, d + 1)
            total = sum(simplex_volume_signed(P[list(s)]) for s in gale_index_set(d, n))
            worst = max(worst, abs(total - ConvexHull(P).volume), abs(total - cyclic_hull_volume(P)))
    note(record_property, f"(d) {worst:.1e}")
    assert worst <= 1e-10


@pytest.mark.criterion(7, PROPERTY)
def test_property_e_decompositions(record_property):
    rng = np.random.default_rng(7005)
    worst = 0.0
    for d in (2, 3, 4, 5):
        for _ in range(5):
            pl = PiecewiseLinearCurve(random_pl(rng, 9, d))
            for k in range(1, d + 1):
                direct = pl_alternating(pl, k)
                for P, val in zip(direct.injections, direct.data):
                    fns = (decompose_even,) if k % 2 == 0 else (decompose_odd, decompose_odd_full)
                    worst = max(worst, *(abs(f(pl, P) - val) for f in fns))
    note(record_property, f"(e) {worst:.1e}")
    assert worst <= 1e-9


@pytest.mark.criterion(8, "log(1,2,3) volume against quadrature and the cyclic oracle")
def test_log_curve_volume(record_property):
    c = CurveFamily.log(1, 2, 3)
    pl = discretize(c, 2000)
    alpha = pl_alternating(pl, 3).value
    quad = alt_volume_quadrature(c)
    cyc = cyclic_hull_volume(pl.vertices, orientation=-1)
    note(record_property, f"alpha={alpha:.6e} |alpha-quad|={abs(alpha - quad):.1e} "
                          f"||alpha|-cyclic|={abs(abs(alpha) - cyc):.1e}")
    assert abs(alpha - quad) <= 1e-6
    assert abs(abs(alpha) - cyc) <= 1e-4
