"""Discrete Ricci flow of axisymmetric icosahedral 3-lattices with neckpinch
surgery, plus Forman-Ricci curvature on weighted graphs."""

__version__ = "0.1.0"

from .curvature import CurvatureField, deficits, duals, ricci
from .embed import MeridianPolyline, embed_meridian
from .errors import (
    DegenerateCap, DrfError, NonMonotoneKnots, NonPositiveLength, NotIncident,
    NotWellCentered, NoValidCircle, RealizabilityError, ZeroEdgeWeight,
)
from .flow import FlowConfig, FlowState, RunResult, evolve, rhs, step_rk4
from .forman import WeightedGraph, forman_curvature
from .geometry import (
    CapMetrics, FrustumMetrics, ICOSA_CIRCUMRADIUS_FACTOR, angle_between,
    cap_metrics, frustum_metrics,
)
from .lattice import (
    NeckpinchLattice, OrbitTable, ValidationReport, build_lattice, make_lattice,
    orbits, validate,
)
from .profiles import ProfileSpec, RHO_FACTOR, make_profile
from .remesh import SplineFit, fit_spline, resample
from .surgery import (
    SphericalCapResult, SurgeryEvent, detect_pinch, spherical_cap_refine,
    split_and_cap,
)

__all__ = [
    "CurvatureField", "deficits", "duals", "ricci",
    "MeridianPolyline", "embed_meridian",
    "DegenerateCap", "DrfError", "NonMonotoneKnots", "NonPositiveLength",
    "NotIncident", "NotWellCentered", "NoValidCircle", "RealizabilityError",
    "ZeroEdgeWeight",
    "FlowConfig", "FlowState", "RunResult", "evolve", "rhs", "step_rk4",
    "WeightedGraph", "forman_curvature",
    "CapMetrics", "FrustumMetrics", "ICOSA_CIRCUMRADIUS_FACTOR",
    "angle_between", "cap_metrics", "frustum_metrics",
    "NeckpinchLattice", "OrbitTable", "ValidationReport", "build_lattice",
    "make_lattice", "orbits", "validate",
    "ProfileSpec", "RHO_FACTOR", "make_profile",
    "SplineFit", "fit_spline", "resample",
    "SphericalCapResult", "SurgeryEvent", "detect_pinch",
    "spherical_cap_refine", "split_and_cap",
    "__version__",
]
