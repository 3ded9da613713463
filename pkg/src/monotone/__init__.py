"""Monotone operators on R^n: slope functional, enlargements and theorem checks."""
from .errors import (InternalInconsistency, InvalidInput, MonotoneError, NumericalError,
                     ResourceError)
from .kernels import BACKEND
from .operators import (BoxNormalCone, FiniteGraph, GraphPoint, GraphSample, Linear,
                        NormSubdiff, OperatorSpec, SmoothGradient, Sum, catalog, evaluate,
                        named_operator, operator_from_dict, resolvent_point, sample_graph,
                        validate_monotone)
from .enlargements import (EnlargementQuery, domain_probe, enlargement_membership,
                           enlargement_polyhedron, image_plus_ball)
from .slope import (SlopeResult, image_distance, regularity_gap, slope_enlarged, slope_estimate,
                    slope_exact)
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "MonotoneError", "InvalidInput", "NumericalError", "ResourceError",
    "InternalInconsistency", "OperatorSpec", "FiniteGraph", "Linear", "NormSubdiff",
    "BoxNormalCone", "SmoothGradient", "Sum", "GraphPoint", "GraphSample", "catalog",
    "named_operator", "operator_from_dict", "evaluate", "resolvent_point", "sample_graph",
    "validate_monotone", "EnlargementQuery", "enlargement_membership", "enlargement_polyhedron",
    "image_plus_ball", "domain_probe", "SlopeResult", "slope_exact", "slope_estimate",
    "slope_enlarged", "image_distance", "regularity_gap", "Verdict",
]
