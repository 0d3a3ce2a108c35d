"""Index and nullity of constant mean curvature tori of revolution in the 3-sphere."""

from .analysis import SCHEMA_VERSION, AnalysisRecord, analyze
from .bounds import flat_index, torus_bounds, verify_surface
from .spectrum import assemble_index, build_potential, solve_spectrum_1d
from .surface import (
    SurfaceClass,
    SurfaceParams,
    closure_search,
    geometry,
    gamma_from_st,
    refine_closing,
    solve_closing,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMA_VERSION",
    "AnalysisRecord",
    "SurfaceClass",
    "SurfaceParams",
    "analyze",
    "assemble_index",
    "build_potential",
    "closure_search",
    "flat_index",
    "gamma_from_st",
    "geometry",
    "refine_closing",
    "solve_closing",
    "solve_spectrum_1d",
    "torus_bounds",
    "verify_surface",
]
