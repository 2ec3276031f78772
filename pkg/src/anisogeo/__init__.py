"""Anisotropic geodesics in Euclidean space via Wulff crystals.

Start from a positive 1-homogeneous directional cost, build its crystal
(the intersection of cost-offset halfplanes) and polar body, and everything
else follows: the induced anisotropic distance, construction and
certification of cost-minimizing paths, the geodesic-ball/polar-body
correspondence, anisotropic isoperimetry, and an independent lattice
oracle for cross-checking distances.
"""

from .crystal import (
    ContactFace,
    ConvexRegion,
    CrystalContext,
    NormalCone,
    SupportingHyperplane,
    build_crystal,
    contact_face,
    double_polar,
    extremal_points,
    hausdorff_distance,
    normal_cone,
    polar,
    support_function,
    supporting_hyperplane,
)
from .geodesics import (
    DirectionDecomposition,
    GeodesicCertificate,
    GeodesicClass,
    Path,
    SegmentCheck,
    classify,
    concatenate,
    construct_geodesic,
    decompose_direction,
    geodesic_ball,
    geodesic_distance,
    geodesic_family,
    is_geodesic,
    path_length,
    resample_polyline,
)
from .integrand import (
    AngularTable,
    Constant,
    Crystalline,
    Dip,
    GridFunction,
    Integrand,
    PNorm,
    Reciprocal,
    SphereGrid,
    contact_contains,
    convex_envelope,
    hypograph_contains,
    inversion_transform,
    support_transform,
    wulff_transform,
)
from .isoperimetry import (
    Polygon,
    WulffReport,
    anisotropic_perimeter,
    isoperimetric_ratio,
    polygon_area,
    random_wulff_competitor,
    wulff_identity_check,
)
from .oracle import Stencil, oracle_convergence, oracle_distance

__version__ = "0.1.0"

__all__ = [
    "AngularTable",
    "Constant",
    "ContactFace",
    "ConvexRegion",
    "Crystalline",
    "CrystalContext",
    "Dip",
    "DirectionDecomposition",
    "GeodesicCertificate",
    "GeodesicClass",
    "GridFunction",
    "Integrand",
    "NormalCone",
    "PNorm",
    "Path",
    "Polygon",
    "Reciprocal",
    "SegmentCheck",
    "SphereGrid",
    "Stencil",
    "SupportingHyperplane",
    "WulffReport",
    "anisotropic_perimeter",
    "build_crystal",
    "classify",
    "concatenate",
    "construct_geodesic",
    "contact_contains",
    "contact_face",
    "convex_envelope",
    "decompose_direction",
    "double_polar",
    "extremal_points",
    "geodesic_ball",
    "geodesic_distance",
    "geodesic_family",
    "hausdorff_distance",
    "hypograph_contains",
    "inversion_transform",
    "is_geodesic",
    "isoperimetric_ratio",
    "normal_cone",
    "oracle_convergence",
    "oracle_distance",
    "path_length",
    "polar",
    "polygon_area",
    "random_wulff_competitor",
    "resample_polyline",
    "support_function",
    "support_transform",
    "supporting_hyperplane",
    "wulff_identity_check",
    "wulff_transform",
]
