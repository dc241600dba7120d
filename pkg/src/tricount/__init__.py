"""Exact and approximate counting of triangulations of planar point sets."""

__version__ = "0.1.0"

from .approx import Caps, DPConfig, approx_count, ratio_audit
from .base import estimate_base, sanity_bounds
from .cuts import CutPolygon, search_cut, verify_cut
from .empty_triangles import enumerate_empty
from .errors import (
    CapacityExceeded,
    DegenerateTriangle,
    InvalidInput,
    InvariantViolation,
    NoTriangulation,
    TricountError,
    UndefinedBase,
)
from .exact import catalan, count_triangulations, enumerate_triangulations
from .oracle import brute_force_oracle

__all__ = [
    "Caps", "DPConfig", "approx_count", "ratio_audit", "estimate_base", "sanity_bounds",
    "CutPolygon", "search_cut", "verify_cut", "enumerate_empty", "CapacityExceeded",
    "DegenerateTriangle", "InvalidInput", "InvariantViolation", "NoTriangulation",
    "TricountError", "UndefinedBase", "catalan", "count_triangulations",
    "enumerate_triangulations", "brute_force_oracle",
]
