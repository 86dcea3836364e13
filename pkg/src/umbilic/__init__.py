"""Computational kernel for lambda-convex bodies in constant-curvature
model spaces, with an experiment harness for isoperimetric-type
comparisons against the lens family."""

from . import arrangement, chart, flow, iso2d, lens, measure, quadrature, umbilic
from .arrangement import (
    LambdaPolyhedron,
    build_polyhedron,
    dump_body_spec,
    load_body,
    random_polyhedron,
)
from .errors import (
    BlowUpError,
    DegenerateError,
    DomainError,
    EmptyBodyError,
    EventNearbyError,
    NonCompactError,
    NonCompactSphereError,
    ToleranceError,
    UmbilicError,
    UnattainableError,
)
from .flow import FlowCurve, FlowSample, coarea_volume, inner_parallel, surface_area_curve
from .iso2d import LambdaPolygon, build_polygon, random_polygon
from .lens import Lens, lens_for_area, make_lens
from .umbilic import UmbilicSphere, lambda_sphere_area, sphere_through

__version__ = "0.1.0"

__all__ = [
    "arrangement",
    "chart",
    "flow",
    "iso2d",
    "lens",
    "measure",
    "quadrature",
    "umbilic",
    "LambdaPolyhedron",
    "build_polyhedron",
    "dump_body_spec",
    "load_body",
    "random_polyhedron",
    "FlowCurve",
    "FlowSample",
    "coarea_volume",
    "inner_parallel",
    "surface_area_curve",
    "LambdaPolygon",
    "build_polygon",
    "random_polygon",
    "Lens",
    "lens_for_area",
    "make_lens",
    "UmbilicSphere",
    "lambda_sphere_area",
    "sphere_through",
    "UmbilicError",
    "DomainError",
    "EmptyBodyError",
    "NonCompactError",
    "DegenerateError",
    "BlowUpError",
    "NonCompactSphereError",
    "ToleranceError",
    "UnattainableError",
    "EventNearbyError",
    "__version__",
]
