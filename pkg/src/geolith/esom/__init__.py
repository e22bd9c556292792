"""Capacity-expansion + dispatch linear program for one municipality."""

from geolith.esom.model import LpModel, RowMeta, VariableMeta
from geolith.esom.build import (
    BuildContext,
    aggregate_municipality,
    annuity_factor,
    build_model,
)
from geolith.esom.account import SolvedSystem, TechBreakdown, account
from geolith.esom.sweep import DepthSweepResult, depth_sweep, optimize_with_geothermal
from geolith.esom.lp_format import read_lp_text, write_lp_text

__all__ = [
    "LpModel",
    "VariableMeta",
    "RowMeta",
    "annuity_factor",
    "aggregate_municipality",
    "build_model",
    "BuildContext",
    "SolvedSystem",
    "TechBreakdown",
    "account",
    "optimize_with_geothermal",
    "depth_sweep",
    "DepthSweepResult",
    "write_lp_text",
    "read_lp_text",
]
