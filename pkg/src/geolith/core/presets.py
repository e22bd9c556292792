"""Scenario presets and synthetic datasets.

The five scenario presets span the literature range for hybrid
geothermal-lithium plants, from worst-case to best-case parameter values,
plus the fleet scenario carrying regional mean values with the temperature
cap left site-specific.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import List

import numpy as np

from geolith.core.config import _DATA_DIR, load_catalog
from geolith.core.demand import synthesize_availability, synthesize_demand
from geolith.core.types import (
    HEAT_LOW,
    PROCESS_LOW,
    PROCESS_MED,
    DleParams,
    GeoBasinProfile,
    GeothermalSiteParams,
    Municipality,
    Scenario,
    TimeSeries,
)
from geolith.dle import ImpactFactors
from geolith.errors import ConfigError, GeolithError

_PRESETS = {
    "worst": Scenario(
        name="worst",
        flow_rate=24.0,
        wellhead_temperature_cap=65.0,
        li_concentration=86.0,
        dle_capex=31.2e6,
        dle_opex_per_tonne=8000.0,
        dle_efficiency=0.50,
        carbonate_price=8500.0,
    ),
    "baseline": Scenario(
        name="baseline",
        flow_rate=24.0,
        wellhead_temperature_cap=131.0,
        li_concentration=159.0,
        dle_capex=20.8e6,
        dle_opex_per_tonne=4000.0,
        dle_efficiency=0.70,
        carbonate_price=17000.0,
    ),
    "optimistic": Scenario(
        name="optimistic",
        flow_rate=82.0,
        wellhead_temperature_cap=176.0,
        li_concentration=198.0,
        dle_capex=15.8e6,
        dle_opex_per_tonne=3000.0,
        dle_efficiency=0.80,
        carbonate_price=21250.0,
    ),
    "best": Scenario(
        name="best",
        flow_rate=140.0,
        wellhead_temperature_cap=220.0,
        li_concentration=237.0,
        dle_capex=10.9e6,
        dle_opex_per_tonne=2000.0,
        dle_efficiency=0.90,
        carbonate_price=25500.0,
    ),
    # Regional means; the temperature cap stays per-municipality (sites in
    # the basin range from roughly 60 to 190 degC achievable).
    "mean_urg": Scenario(
        name="mean_urg",
        flow_rate=75.0,
        wellhead_temperature_cap=None,
        li_concentration=175.0,
        dle_capex=20.8e6,
        dle_opex_per_tonne=4000.0,
        dle_efficiency=0.70,
        carbonate_price=17000.0,
    ),
}

SCENARIO_NAMES = tuple(_PRESETS)


def scenario_preset(name: str) -> Scenario:
    """Return one of the named scenario presets."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise GeolithError(
            f"unknown scenario preset '{name}'; known: {', '.join(SCENARIO_NAMES)}"
        ) from None


def load_impact_factors(path: str | Path | None = None) -> ImpactFactors:
    """Impact factors from a data file (bundled defaults when no path)."""
    path = Path(path) if path is not None else _DATA_DIR / "impact_factors.json"
    if not path.exists():
        raise ConfigError("file not found", location=str(path))
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    return ImpactFactors(
        kg_li_per_pack=doc["kg_li_per_pack"],
        reference_ev_registrations=doc["reference_ev_registrations"],
        abatement_factor=doc["abatement_factor"],
        comparison_footprints=doc["comparison_footprints"],
    )


# Single-gradient mean profile used for synthetic fleet sites.
_FLEET_BASIN = GeoBasinProfile(surface_temperature=10.0, layers=((5000.0, 43.0),))


def synthetic_fleet(
    n: int, seed: int = 0, depth_step: float = 10.0, hours: int = 8760
) -> List[Municipality]:
    """Deterministic synthetic municipalities for fleet studies.

    Sites differ in achievable wellhead temperature (uniform 60-190 degC),
    lithium concentration, demand scale, and renewable potentials. All share
    the bundled technology catalog.
    """
    if n < 1:
        raise GeolithError("fleet needs at least one municipality")
    catalog = load_catalog()
    rng = np.random.default_rng(seed)
    municipalities = []
    for i in range(n):
        total_el = float(rng.uniform(40e6, 400e6))  # kWh/a
        total_heat = float(rng.uniform(40e6, 380e6))
        cap = float(rng.uniform(60.0, 190.0))
        li_conc = float(rng.uniform(90.0, 240.0))
        demand = synthesize_demand(total_el, 0.6 * total_heat, "default", seed=seed * 1000 + i)
        heat_series = demand[HEAT_LOW].values
        demand[PROCESS_LOW] = TimeSeries(
            np.full(hours, 0.25 * total_heat / hours), unit="kW", kind="demand"
        )
        demand[PROCESS_MED] = TimeSeries(
            np.full(hours, 0.15 * total_heat / hours), unit="kW", kind="demand"
        )
        demand[HEAT_LOW] = TimeSeries(heat_series, unit="kW", kind="demand")
        scale = total_el / 300e6
        municipalities.append(
            Municipality(
                name=f"synthetic_{i:03d}",
                demand=demand,
                potentials={
                    "rooftop_pv": 250_000.0 * scale,
                    "openfield_pv": float(rng.uniform(0.2, 1.5)) * 30_000.0 * scale,
                    "onshore_wind": float(rng.uniform(0.0, 2.0)) * 60_000.0 * scale,
                    "biogas_plant": 4_000.0 * scale,
                    "biomass_boiler": 12_000.0 * scale,
                },
                existing={"rooftop_pv": 20_000.0 * scale},
                site=GeothermalSiteParams(
                    flow_rate=75.0,
                    basin=_FLEET_BASIN,
                    depth_step=depth_step,
                    li_concentration=li_conc,
                    wellhead_temperature_cap=cap,
                ),
                dle=DleParams(
                    capex=20.8e6,
                    opex_per_tonne=4000.0,
                    extraction_efficiency=0.70,
                    carbonate_price=17000.0,
                ),
                catalog=catalog,
                profiles={
                    "pv_rooftop": synthesize_availability("pv", seed=seed * 1000 + i),
                    "pv_openfield": synthesize_availability("pv", seed=seed * 1000 + i + 500),
                    "wind": synthesize_availability("wind", seed=seed * 1000 + i),
                },
            )
        )
    return municipalities
