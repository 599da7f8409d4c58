"""Convex hull volumes of curves through alternating path signatures.

The top-level alternating signature ``alpha^(d)`` of a cyclic curve in ``R^d``
equals the volume of its convex hull. This package computes ``alpha^(d)`` by
several independent routes, certifies the curve classes for which the identity
holds, and checks the result against geometric volume oracles.
"""
from .classify import (
    ClassificationReport,
    ClassTest,
    boundary_membership,
    classify_curve,
    cyclic_relaxed_test,
    d_order_test,
    strict_det_test,
    torsion_test,
)
from .curve_model import (
    CurveDimensionError,
    CurveFamily,
    CurveFileError,
    PiecewiseLinearCurve,
    discretize,
    displacement,
    load_curve,
    restrict,
)
from .cyclic_polytope import (
    InputNotDOrder,
    convex_hull,
    cyclic_hull_volume,
    gale_index_set,
    hull_volume_exact,
    hull_volume_montecarlo,
)
from .decomposition import (
    SkewSpectrum,
    align_displacement,
    decompose_even,
    decompose_odd,
    decompose_odd_full,
    pfaffian,
    skew_spectrum,
    volume_via_eigenvalues,
)
from .estimators import AlternatingSignature, PathSignature, SignatureVolume, check_curves
from .signature import (
    AlternatingTensor,
    SignatureTensor,
    TruncatedSignature,
    alt,
    alt_volume_quadrature,
    chen_concat,
    pl_alternating,
    pl_signature,
    segment_signature,
    signed_area_matrix,
)
from .zonoid import Zonotope, membership_2d_moment_zonoid, support, zonotope_of_curve, zonotope_volume

__all__ = [
    "ClassificationReport",
    "ClassTest",
    "boundary_membership",
    "classify_curve",
    "cyclic_relaxed_test",
    "d_order_test",
    "strict_det_test",
    "torsion_test",
    "CurveDimensionError",
    "CurveFamily",
    "CurveFileError",
    "PiecewiseLinearCurve",
    "discretize",
    "displacement",
    "load_curve",
    "restrict",
    "InputNotDOrder",
    "convex_hull",
    "cyclic_hull_volume",
    "gale_index_set",
    "hull_volume_exact",
    "hull_volume_montecarlo",
    "SkewSpectrum",
    "align_displacement",
    "decompose_even",
    "decompose_odd",
    "decompose_odd_full",
    "pfaffian",
    "skew_spectrum",
    "volume_via_eigenvalues",
    "AlternatingSignature",
    "PathSignature",
    "SignatureVolume",
    "check_curves",
    "AlternatingTensor",
    "SignatureTensor",
    "TruncatedSignature",
    "alt",
    "alt_volume_quadrature",
    "chen_concat",
    "pl_alternating",
    "pl_signature",
    "segment_signature",
    "signed_area_matrix",
    "Zonotope",
    "membership_2d_moment_zonoid",
    "support",
    "zonotope_of_curve",
    "zonotope_volume",
]

__version__ = "0.1.0"
