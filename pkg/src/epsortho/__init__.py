"""Epsilon-orthographic regions on smooth surfaces and their boundary approximations."""

from ._kernels import BACKEND
from .approx import (
    BENCHMARK_CENTERS,
    METHOD_TAGS,
    ApproxComparison,
    BoundaryApprox,
    approx_circular_one,
    approx_circular_two,
    approx_elliptical,
    approx_polygonal,
    build_approx,
    circular_two_radius,
    compare,
    directional_bounds,
    max_abs_curvature,
)
from .errors import (
    DegenerateRegionError,
    DemError,
    DemFormatError,
    DemReadError,
    DemSizeError,
    EpsOrthoError,
    NonSmoothPointError,
    OutOfDomainError,
    UnknownSurfaceError,
)
from .imaging import (
    UpperBound,
    ValidityReport,
    curve_validity,
    imaging_curve,
    imaging_point,
    imaging_surface,
    unit_normal,
    upper_bound_D,
)
from .region import (
    CurveBounds,
    OrthoParams,
    OrthoRegion,
    brute_force_curve_bounds,
    brute_force_region,
    circle_coverage,
    curve_bounds,
    pair_gen,
    phi_curve,
    phi_surface,
    region_boundary,
    surface_region,
    tangent_region,
    theta_curve,
    theta_surface,
)
from .surface import (
    AnalyticCurve,
    AnalyticSurface,
    HeightField,
    ParametricSurface,
    builtin_surface,
    gaussian_curvature,
    gaussian_curvature_at,
    load_dem,
    parametric_surface,
    smooth,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BENCHMARK_CENTERS",
    "METHOD_TAGS",
    "ApproxComparison",
    "BoundaryApprox",
    "approx_circular_one",
    "approx_circular_two",
    "approx_elliptical",
    "approx_polygonal",
    "build_approx",
    "circular_two_radius",
    "compare",
    "directional_bounds",
    "max_abs_curvature",
    "DegenerateRegionError",
    "DemError",
    "DemFormatError",
    "DemReadError",
    "DemSizeError",
    "EpsOrthoError",
    "NonSmoothPointError",
    "OutOfDomainError",
    "UnknownSurfaceError",
    "UpperBound",
    "ValidityReport",
    "curve_validity",
    "imaging_curve",
    "imaging_point",
    "imaging_surface",
    "unit_normal",
    "upper_bound_D",
    "CurveBounds",
    "OrthoParams",
    "OrthoRegion",
    "brute_force_curve_bounds",
    "brute_force_region",
    "circle_coverage",
    "curve_bounds",
    "pair_gen",
    "phi_curve",
    "phi_surface",
    "region_boundary",
    "surface_region",
    "tangent_region",
    "theta_curve",
    "theta_surface",
    "AnalyticCurve",
    "AnalyticSurface",
    "HeightField",
    "ParametricSurface",
    "builtin_surface",
    "gaussian_curvature",
    "gaussian_curvature_at",
    "load_dem",
    "parametric_surface",
    "smooth",
]
