"""Intersection bodies of bodies of revolution and their equatorial convexity."""

from .analysis import (
    AnalysisError,
    BMResult,
    EquatorConvexityReport,
    PowerTypeFit,
    bm_ball,
    equator_convexity,
    modulus_equator,
    power_type_fit,
    uniformity_scan,
)
from .bodies import (
    Ball,
    CappedCylinder,
    CosineSeries,
    Cylinder,
    DoubleCone,
    MeridianProfile,
    Mod4Body,
    PBody,
    Sampled,
    SegmentBody,
    TwoCylinderUnion,
    dilate,
    psi,
    radial,
    sigma,
)
from .experiments import SCENARIOS, ExperimentConfig, random_star_profile, run_scenario
from .io import format_body, parse_body
from .quadrature import QuadratureConfig, QuadratureError
from .radon import (
    IntersectionProfile,
    NormalizationConstants,
    OperatorResult,
    ik_axis,
    ik_radial,
    intersection_body,
    iterate_intersection,
    psi_ik,
)

__version__ = "0.1.0"


__all__ = [
    "AnalysisError",
    "Ball",
    "bm_ball",
    "BMResult",
    "CappedCylinder",
    "CosineSeries",
    "Cylinder",
    "dilate",
    "DoubleCone",
    "equator_convexity",
    "EquatorConvexityReport",
    "ExperimentConfig",
    "format_body",
    "ik_axis",
    "ik_radial",
    "intersection_body",
    "IntersectionProfile",
    "iterate_intersection",
    "MeridianProfile",
    "Mod4Body",
    "modulus_equator",
    "NormalizationConstants",
    "OperatorResult",
    "parse_body",
    "PBody",
    "power_type_fit",
    "PowerTypeFit",
    "psi",
    "psi_ik",
    "QuadratureConfig",
    "QuadratureError",
    "radial",
    "random_star_profile",
    "run_scenario",
    "Sampled",
    "SCENARIOS",
    "SegmentBody",
    "sigma",
    "TwoCylinderUnion",
    "uniformity_scan",
]
