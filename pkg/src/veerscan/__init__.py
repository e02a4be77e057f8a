"""Taut and veering ideal triangulations, cusp train tracks and carried cones."""
from .cusp import CuspTrack, build_cusp_track, classify_edges, cusp_carried_cone, ladderpole_slope
from .faces import Analysis, b2_filled, carried_cone, main_verdict
from .triangulation import TautTriangulation, load, parse, serialize, solve_coorientations, validate_taut
from .veering import is_veering, tet_type
from .weights import HomologyModel, branching_system

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "CuspTrack",
    "HomologyModel",
    "TautTriangulation",
    "b2_filled",
    "branching_system",
    "build_cusp_track",
    "carried_cone",
    "classify_edges",
    "cusp_carried_cone",
    "is_veering",
    "ladderpole_slope",
    "load",
    "main_verdict",
    "parse",
    "serialize",
    "solve_coorientations",
    "tet_type",
    "validate_taut",
]
