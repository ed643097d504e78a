"""Bott–Chern hypercohomology workbench for Lie-algebra models of complex manifolds."""

from .cohomology import (
    CohomologySpace,
    MapSummary,
    aeppli,
    bott_chern,
    cohomology,
    de_rham,
    del_cohomology,
    dolbeault,
    hyper_bc,
    hyper_truncated,
    map_C,
    map_I,
)
from .complexes import (
    ChainComplex,
    ChainMap,
    build_de_rham,
    build_del_row,
    build_dolbeault_row,
    build_L,
    build_truncated_total,
    chain_map_C,
)
from .diamond import (
    DimTables,
    HodgeDiamond,
    SurfaceData,
    blowup_predict,
    bundle_predict,
    invariance_check,
    kahler_tables,
    point_tables,
    surface_invariants,
    tables_from_model,
)
from .dsl import format_model, parse_form, parse_model
from .exterior import Form, LieModel, Monomial, validate_model
from .invariants import club, consistency_report, delta_bc_dol, nk_degrees, spade
from .linalg import GaussianRational, MatrixQI

__version__ = "0.1.0"
