"""Exact-arithmetic workbench for rich lines on Cartesian grids A x A."""

from richlines.errors import InvariantViolation, PreconditionError
from richlines.lines import (
    EVERY_POINT,
    IDENTITY,
    Line,
    Point,
    compose,
    fixed_point,
    intersect,
    invert,
    star,
)
from richlines.grid import (
    GroundSet,
    RichLineRecord,
    count_incidences,
    enumerate_rich,
    rich_count_bound_check,
    richness,
    x_trace,
    y_trace,
)

__version__ = "0.1.0"

__all__ = [
    "EVERY_POINT",
    "IDENTITY",
    "GroundSet",
    "InvariantViolation",
    "Line",
    "Point",
    "PreconditionError",
    "RichLineRecord",
    "compose",
    "count_incidences",
    "enumerate_rich",
    "fixed_point",
    "intersect",
    "invert",
    "rich_count_bound_check",
    "richness",
    "star",
    "x_trace",
    "y_trace",
]
