#!/usr/bin/env python3
"""Regenerate the bundled example dataset (deterministic).

Writes src/geolith/data/bruchsal_like/: one municipality document plus the
demand and availability CSV series. Demand magnitudes and renewable limits
follow the published figures for the reference municipality; hourly shapes
are synthetic stand-ins, so equation-level results never depend on them.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from geolith.core.config import SCHEMA_VERSION, write_series_csv
from geolith.core.demand import synthesize_availability, synthesize_demand
from geolith.core.types import (
    ELECTRICITY,
    HEAT_LOW,
    PROCESS_LOW,
    PROCESS_MED,
    HOURS_PER_YEAR,
    TimeSeries,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "geolith" / "data" / "bruchsal_like"

# Annual demand (kWh/a). End-use electricity excludes conversion and storage
# losses, which the optimizer adds on top of this series.
TOTAL_EL = 297e6
TOTAL_HEAT_LOW = 280e6
TOTAL_PROCESS_LOW = 90e6
TOTAL_PROCESS_MED = 95e6


def industrial_profile(total: float, seed: int) -> TimeSeries:
    """Two-shift weekday pattern with a weekend floor."""
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS_PER_YEAR)
    day = hours // 24
    hod = hours % 24
    weekday = (day % 7) < 5
    shape = np.where(weekday & (hod >= 6) & (hod < 22), 1.0, 0.45)
    noise = 1.0 + 0.05 * np.repeat(rng.normal(0, 1, HOURS_PER_YEAR // 24), 24)
    shape = shape * np.clip(noise, 0.7, 1.3)
    shape *= total / shape.sum()
    return TimeSeries(shape, unit="kW", kind="demand")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    demand = synthesize_demand(TOTAL_EL, TOTAL_HEAT_LOW, "default", seed=2045)
    demand[PROCESS_LOW] = industrial_profile(TOTAL_PROCESS_LOW, seed=11)
    demand[PROCESS_MED] = industrial_profile(TOTAL_PROCESS_MED, seed=12)

    profiles = {
        "pv_rooftop": synthesize_availability("pv", seed=1),
        "pv_openfield": synthesize_availability("pv", seed=2),
        "wind": synthesize_availability("wind", seed=3),
    }

    refs_demand = {}
    for commodity, series in demand.items():
        ref = f"demand_{commodity}.csv"
        write_series_csv(OUT / ref, series)
        refs_demand[commodity] = ref
    refs_profiles = {}
    for name, series in profiles.items():
        ref = f"profile_{name}.csv"
        write_series_csv(OUT / ref, series)
        refs_profiles[name] = ref

    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": "bruchsal_like",
        "comment": (
            "Synthetic example municipality; demand shapes and technology "
            "costs are package assumptions, site and scenario figures follow "
            "the reference plant."
        ),
        "catalog": "bundled",
        "demand": refs_demand,
        "profiles": refs_profiles,
        "potentials": {
            "onshore_wind": 75000.0,
            "openfield_pv": 31000.0,
            "rooftop_pv": 290000.0,
            "biogas_plant": 4000.0,
            "biomass_boiler": 15000.0,
        },
        "existing": {
            "rooftop_pv": 24000.0,
            "openfield_pv": 1220.0,
        },
        "sectors": ["households", "TCS", "industry"],
        "site": {
            "flow_rate": 24.0,
            "brine_density": 0.95,
            "brine_heat_capacity": 4.31,
            "min_injection_temperature": 50.0,
            "max_depth": 5000.0,
            "depth_step": 10.0,
            "well_distance": 1887.0,
            "second_well_cost_factor": 0.9,
            "li_concentration": 159.0,
            "wellhead_temperature_cap": 131.0,
            "basin": {
                "surface_temperature": 10.0,
                "layers": [[1900.0, 47.0], [3250.0, 41.0], [5000.0, 33.0]],
            },
        },
        "dle": {
            "capex": 20.8e6,
            "opex_per_tonne": 4000.0,
            "extraction_efficiency": 0.70,
            "carbonate_price": 17000.0,
        },
    }
    import json

    with open(OUT / "bruchsal_like.json", "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote dataset to {OUT}")


if __name__ == "__main__":
    main()
