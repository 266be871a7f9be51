"""Orthonormal polynomials of planar measures viewed as dynamical systems."""
from .dynamics import (
    GridClassification,
    GridSpec,
    GreensField,
    classify,
    classify_with_green,
    escape_radius,
    extract_filled,
    extract_julia,
    greens_iterated,
    verify_functional_equation,
)
from .measures import (
    DiscreteMeasure,
    MeasureSpec,
    build_brolin,
    build_circle,
    build_interval_arcsine,
    build_polygon_boundary,
    build_symmetric_disks,
    load_measure,
    save_measure,
)
from .orthopoly import (
    OrthoSequence,
    orthonormalize,
    verify_bgh,
    verify_fejer,
    verify_parity,
)
from .polynomial import Polynomial, evaluate, zeros_of
from .potential import (
    CapacityEstimate,
    capacity_bounds_check,
    capacity_decay,
    capacity_formula_check,
    greens_equilibrium,
    greens_orthopoly,
    leja_capacity,
    leja_points,
    supnorm_bound_report,
)
from .samples import SetSample
from .setmetrics import convergence_table, distance, membership_liminf, semidistance

__version__ = "0.1.0"

__all__ = [
    "CapacityEstimate",
    "DiscreteMeasure",
    "GreensField",
    "GridClassification",
    "GridSpec",
    "MeasureSpec",
    "OrthoSequence",
    "Polynomial",
    "SetSample",
    "build_brolin",
    "build_circle",
    "build_interval_arcsine",
    "build_polygon_boundary",
    "build_symmetric_disks",
    "capacity_bounds_check",
    "capacity_decay",
    "capacity_formula_check",
    "classify",
    "classify_with_green",
    "convergence_table",
    "distance",
    "escape_radius",
    "evaluate",
    "extract_filled",
    "extract_julia",
    "greens_equilibrium",
    "greens_iterated",
    "greens_orthopoly",
    "leja_capacity",
    "leja_points",
    "load_measure",
    "membership_liminf",
    "orthonormalize",
    "save_measure",
    "semidistance",
    "supnorm_bound_report",
    "verify_bgh",
    "verify_fejer",
    "verify_functional_equation",
    "verify_parity",
    "zeros_of",
]
