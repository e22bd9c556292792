"""Domain types, configuration ingestion, presets, and synthetic data."""

from geolith.core.types import (
    COMMODITIES,
    ELECTRICITY,
    GEOTHERMAL_HEAT_COMMODITIES,
    HEAT_LOW,
    HYDROGEN,
    PROCESS_HIGH,
    PROCESS_LOW,
    PROCESS_MED,
    DleParams,
    EconomicSettings,
    GeoBasinProfile,
    GeothermalSiteParams,
    Municipality,
    Scenario,
    TechnologySpec,
    TimeSeries,
)
from geolith.core.config import (
    load_catalog,
    load_municipality,
    save_municipality,
    bundled_catalog_path,
    bundled_municipality_path,
)
from geolith.core.presets import (
    SCENARIO_NAMES,
    scenario_preset,
    load_impact_factors,
    synthetic_fleet,
)
from geolith.core.demand import synthesize_demand, synthesize_availability

__all__ = [
    "TimeSeries",
    "TechnologySpec",
    "GeoBasinProfile",
    "GeothermalSiteParams",
    "DleParams",
    "Scenario",
    "Municipality",
    "EconomicSettings",
    "COMMODITIES",
    "ELECTRICITY",
    "HEAT_LOW",
    "PROCESS_LOW",
    "PROCESS_MED",
    "PROCESS_HIGH",
    "HYDROGEN",
    "GEOTHERMAL_HEAT_COMMODITIES",
    "load_municipality",
    "save_municipality",
    "load_catalog",
    "bundled_catalog_path",
    "bundled_municipality_path",
    "scenario_preset",
    "SCENARIO_NAMES",
    "load_impact_factors",
    "synthetic_fleet",
    "synthesize_demand",
    "synthesize_availability",
]
