"""Core domain types.

All types are frozen dataclasses validated on construction; instances are
immutable and safe to share between threads or processes. Units follow the
package convention: money in EUR, energy in kWh, power in kW, temperatures
in degC, flow in l/s, lithium mass in kg (tonnes where a field says so).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from geolith.errors import InvariantViolation

HOURS_PER_YEAR = 8760

# Commodity identifiers used throughout the model.
ELECTRICITY = "electricity"
HEAT_LOW = "heat_low"
PROCESS_LOW = "process_heat_low"
PROCESS_MED = "process_heat_medium"
PROCESS_HIGH = "process_heat_high"
HYDROGEN = "hydrogen"

COMMODITIES = (ELECTRICITY, HEAT_LOW, PROCESS_LOW, PROCESS_MED, PROCESS_HIGH, HYDROGEN)

# Brine heat can only serve demands at or below ~100 degC: space/district
# heat and the low-temperature process tier. Higher tiers need other
# converters regardless of wellhead temperature.
GEOTHERMAL_HEAT_COMMODITIES = (HEAT_LOW, PROCESS_LOW)

# Mass ratio Li2CO3 : Li. Fixed by stoichiometry convention.
LI_TO_CARBONATE = 5.324


def _check(condition: bool, invariant: str, message: str | None = None) -> None:
    if not condition:
        raise InvariantViolation(invariant, message)


@dataclass(frozen=True)
class TimeSeries:
    """One year of hourly values with a declared unit and kind.

    ``kind`` is one of ``"demand"`` (kW, finite and >= 0),
    ``"capacity_factor"`` (dimensionless, within [0, 1]) or ``"other"``.
    """

    values: np.ndarray
    unit: str = "kW"
    kind: str = "other"

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        arr = np.array(arr, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        _check(arr.ndim == 1 and arr.size > 0, "length > 0")
        _check(bool(np.isfinite(arr).all()), "values finite")
        if self.kind == "capacity_factor":
            _check(
                bool((arr >= 0.0).all() and (arr <= 1.0 + 1e-12).all()),
                "capacity factors in [0, 1]",
            )
        elif self.kind == "demand":
            _check(bool((arr >= 0.0).all()), "demand >= 0")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def annual_sum(self) -> float:
        return float(self.values.sum())


@dataclass(frozen=True)
class TechnologySpec:
    """Catalog entry for one technology.

    ``kind`` is one of ``source``, ``conversion``, ``storage``, ``sink``.
    Sources and conversions produce ``output``; conversions additionally draw
    their inputs in the proportions of ``input_shares`` (shares of total
    energy input, summing to 1), with ``efficiency`` the output-per-total-
    input ratio. Input commodities absent from the balance set (e.g. ambient
    heat for heat pumps) are treated as freely available, which keeps every
    conversion edge efficiency within (0, 1].

    Capacity is kW, except storage where it is kWh of energy content and
    ``capex_per_unit`` is EUR/kWh.
    """

    name: str
    kind: str
    capex_per_unit: float
    fixed_opex_share: float = 0.0
    variable_opex: float = 0.0
    economic_lifetime: float = 20.0
    efficiency: float = 1.0
    output: Optional[str] = None
    input_shares: Mapping[str, float] = field(default_factory=dict)
    capacity_min: float = 0.0
    capacity_existing: float = 0.0
    capacity_max: float = math.inf
    availability_profile: Optional[str] = None
    # Storage-only parameters.
    charge_efficiency: float = 1.0
    discharge_efficiency: float = 1.0
    self_discharge_per_hour: float = 0.0
    hours_to_power: float = 1.0

    def __post_init__(self):
        _check(self.kind in ("source", "conversion", "storage", "sink"), "kind valid")
        _check(0.0 < self.efficiency <= 1.0, "0 < efficiency <= 1")
        _check(self.capex_per_unit >= 0.0, "capex >= 0")
        _check(0.0 <= self.fixed_opex_share <= 1.0, "0 <= fixed_opex_share <= 1")
        _check(self.economic_lifetime >= 1.0, "lifetime >= 1")
        _check(self.capacity_min <= self.capacity_max, "capacity_min <= capacity_max")
        _check(self.capacity_existing <= self.capacity_max, "existing <= capacity_max")
        _check(self.capacity_min >= 0.0, "capacity_min >= 0")
        if self.kind == "conversion":
            _check(bool(self.input_shares), "conversion declares inputs")
            total = sum(self.input_shares.values())
            _check(abs(total - 1.0) <= 1e-9, "input shares sum to 1")
            _check(
                all(s > 0 for s in self.input_shares.values()),
                "input shares positive",
            )
        if self.kind in ("source", "conversion"):
            _check(self.output is not None, "output commodity declared")
        if self.kind == "storage":
            _check(self.output is not None, "stored commodity declared")
            _check(0.0 < self.charge_efficiency <= 1.0, "0 < charge_efficiency <= 1")
            _check(0.0 < self.discharge_efficiency <= 1.0, "0 < discharge_efficiency <= 1")
            _check(0.0 <= self.self_discharge_per_hour < 1.0, "0 <= self discharge < 1")
            _check(self.hours_to_power > 0.0, "hours_to_power > 0")
        object.__setattr__(self, "input_shares", dict(self.input_shares))


@dataclass(frozen=True)
class GeoBasinProfile:
    """Piecewise-linear geothermal gradient profile.

    ``layers`` is an ordered list of ``(depth_upper_bound_m, gradient_degC_per_km)``
    with strictly increasing bounds; the last bound must cover the deepest
    drillable depth.
    """

    surface_temperature: float
    layers: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        layers = tuple((float(d), float(g)) for d, g in self.layers)
        object.__setattr__(self, "layers", layers)
        _check(len(layers) > 0, "at least one layer")
        bounds = [d for d, _ in layers]
        _check(
            all(b2 > b1 for b1, b2 in zip(bounds, bounds[1:])) and bounds[0] > 0,
            "layer depth bounds strictly increasing",
        )
        _check(all(g > 0 for _, g in layers), "gradients > 0")

    @property
    def max_covered_depth(self) -> float:
        return self.layers[-1][0]


@dataclass(frozen=True)
class GeothermalSiteParams:
    """Site-specific geothermal and brine parameters for one municipality."""

    flow_rate: float  # l/s
    brine_density: float = 0.95  # kg/l
    brine_heat_capacity: float = 4.31  # kJ/(kg K)
    basin: GeoBasinProfile = GeoBasinProfile(10.0, ((5000.0, 43.0),))
    min_injection_temperature: float = 50.0  # degC
    max_depth: float = 5000.0  # m
    depth_step: float = 10.0  # m
    well_distance: float = 1887.0  # m, calibrated default
    second_well_cost_factor: float = 0.9
    li_concentration: float = 0.0  # mg/l
    wellhead_temperature_cap: Optional[float] = None  # degC

    def __post_init__(self):
        _check(self.flow_rate >= 0.0, "flow_rate >= 0")
        _check(self.brine_density > 0.0, "brine_density > 0")
        _check(self.brine_heat_capacity > 0.0, "brine_heat_capacity > 0")
        _check(self.min_injection_temperature >= 0.0, "min_injection_temperature >= 0")
        _check(1000.0 <= self.max_depth <= 5000.0, "1000 <= max_depth <= 5000")
        _check(self.depth_step > 0.0, "depth_step > 0")
        _check(self.well_distance >= 0.0, "well_distance >= 0")
        _check(
            0.0 < self.second_well_cost_factor <= 1.0,
            "0 < second_well_cost_factor <= 1",
        )
        _check(self.li_concentration >= 0.0, "li_concentration >= 0")
        _check(
            self.basin.max_covered_depth >= self.max_depth,
            "basin covers max_depth",
        )
        if self.wellhead_temperature_cap is not None:
            _check(self.wellhead_temperature_cap > 0.0, "wellhead_temperature_cap > 0")


@dataclass(frozen=True)
class DleParams:
    """Direct lithium extraction plant parameters."""

    capex: float  # EUR (lump investment)
    opex_per_tonne: float  # EUR per tonne Li2CO3
    extraction_efficiency: float  # fraction of dissolved Li recovered
    carbonate_price: float  # EUR per tonne Li2CO3
    li_to_carbonate_factor: float = LI_TO_CARBONATE

    def __post_init__(self):
        _check(0.0 <= self.extraction_efficiency <= 1.0, "0 <= extraction_efficiency <= 1")
        _check(self.capex >= 0.0, "capex >= 0")
        _check(self.opex_per_tonne >= 0.0, "opex_per_tonne >= 0")
        _check(self.carbonate_price >= 0.0, "carbonate_price >= 0")
        _check(
            self.li_to_carbonate_factor == LI_TO_CARBONATE,
            f"li_to_carbonate_factor == {LI_TO_CARBONATE}",
        )


@dataclass(frozen=True)
class Scenario:
    """A named bundle of geothermal/DLE parameter overrides.

    Fields left as ``None`` keep the municipality's own values, which is how
    the fleet scenario leaves the temperature cap site-specific.
    """

    name: str
    flow_rate: Optional[float] = None
    wellhead_temperature_cap: Optional[float] = None
    li_concentration: Optional[float] = None
    dle_capex: Optional[float] = None
    dle_opex_per_tonne: Optional[float] = None
    dle_efficiency: Optional[float] = None
    carbonate_price: Optional[float] = None

    def __post_init__(self):
        if self.flow_rate is not None:
            _check(self.flow_rate >= 0.0, "flow_rate >= 0")
        if self.wellhead_temperature_cap is not None:
            _check(self.wellhead_temperature_cap > 0.0, "wellhead_temperature_cap > 0")
        if self.li_concentration is not None:
            _check(self.li_concentration >= 0.0, "li_concentration >= 0")
        if self.dle_capex is not None:
            _check(self.dle_capex >= 0.0, "dle_capex >= 0")
        if self.dle_opex_per_tonne is not None:
            _check(self.dle_opex_per_tonne >= 0.0, "dle_opex_per_tonne >= 0")
        if self.dle_efficiency is not None:
            _check(0.0 <= self.dle_efficiency <= 1.0, "0 <= dle_efficiency <= 1")
        if self.carbonate_price is not None:
            _check(self.carbonate_price >= 0.0, "carbonate_price >= 0")

    def apply_site(self, site: GeothermalSiteParams) -> GeothermalSiteParams:
        """Site parameters with this scenario's overrides applied."""
        return GeothermalSiteParams(
            flow_rate=self.flow_rate if self.flow_rate is not None else site.flow_rate,
            brine_density=site.brine_density,
            brine_heat_capacity=site.brine_heat_capacity,
            basin=site.basin,
            min_injection_temperature=site.min_injection_temperature,
            max_depth=site.max_depth,
            depth_step=site.depth_step,
            well_distance=site.well_distance,
            second_well_cost_factor=site.second_well_cost_factor,
            li_concentration=(
                self.li_concentration
                if self.li_concentration is not None
                else site.li_concentration
            ),
            wellhead_temperature_cap=(
                self.wellhead_temperature_cap
                if self.wellhead_temperature_cap is not None
                else site.wellhead_temperature_cap
            ),
        )

    def apply_dle(self, dle: DleParams) -> DleParams:
        """DLE parameters with this scenario's overrides applied."""
        return DleParams(
            capex=self.dle_capex if self.dle_capex is not None else dle.capex,
            opex_per_tonne=(
                self.dle_opex_per_tonne
                if self.dle_opex_per_tonne is not None
                else dle.opex_per_tonne
            ),
            extraction_efficiency=(
                self.dle_efficiency
                if self.dle_efficiency is not None
                else dle.extraction_efficiency
            ),
            carbonate_price=(
                self.carbonate_price
                if self.carbonate_price is not None
                else dle.carbonate_price
            ),
            li_to_carbonate_factor=dle.li_to_carbonate_factor,
        )


@dataclass(frozen=True)
class EconomicSettings:
    """Financing assumptions.

    The 5 %/a default interest rate is a package assumption (a discount rate
    is required to annuitize investments but none is prescribed by the input
    data); override it in the configuration when a different rate applies.
    """

    interest_rate: float = 0.05
    currency_year: str = "EUR2022"
    well_lifetime: float = 30.0  # years, assumption
    dle_lifetime: float = 20.0  # years, assumption

    def __post_init__(self):
        _check(0.0 <= self.interest_rate < 1.0, "0 <= interest_rate < 1")
        _check(self.well_lifetime >= 1.0, "well_lifetime >= 1")
        _check(self.dle_lifetime >= 1.0, "dle_lifetime >= 1")


@dataclass(frozen=True)
class Municipality:
    """One municipality: demands, renewable limits, and its geothermal site."""

    name: str
    demand: Mapping[str, TimeSeries]
    potentials: Mapping[str, float]  # technology -> max buildable capacity
    existing: Mapping[str, float]  # technology -> installed capacity
    site: GeothermalSiteParams
    dle: DleParams
    catalog: Mapping[str, TechnologySpec]
    profiles: Mapping[str, TimeSeries] = field(default_factory=dict)
    sectors: Sequence[str] = ("households", "TCS", "industry")

    def __post_init__(self):
        object.__setattr__(self, "demand", dict(self.demand))
        object.__setattr__(self, "potentials", dict(self.potentials))
        object.__setattr__(self, "existing", dict(self.existing))
        object.__setattr__(self, "catalog", dict(self.catalog))
        object.__setattr__(self, "profiles", dict(self.profiles))
        object.__setattr__(self, "sectors", tuple(self.sectors))

        lengths = {len(ts) for ts in self.demand.values()}
        _check(len(lengths) <= 1, "demand series share one length")
        for commodity in self.demand:
            _check(commodity in COMMODITIES, f"known commodity: {commodity}")
        for tech in list(self.potentials) + list(self.existing):
            _check(
                tech in self.catalog,
                f"technology '{tech}' exists in the catalog",
            )
        for tech, spec in self.catalog.items():
            if spec.availability_profile is not None:
                _check(
                    spec.availability_profile in self.profiles,
                    f"availability profile '{spec.availability_profile}' present",
                )
        existing = dict(self.existing)
        for tech, cap in existing.items():
            _check(cap >= 0.0, f"existing capacity >= 0 for {tech}")
            maxcap = self.capacity_max(tech)
            _check(cap <= maxcap + 1e-9, f"existing <= capacity_max for {tech}")

    @property
    def n_hours(self) -> int:
        if not self.demand:
            return HOURS_PER_YEAR
        return len(next(iter(self.demand.values())))

    def capacity_max(self, tech: str) -> float:
        """Buildable upper bound: the municipal potential when declared,
        otherwise the catalog-wide cap."""
        if tech in self.potentials:
            return float(self.potentials[tech])
        return float(self.catalog[tech].capacity_max)

    def capacity_existing(self, tech: str) -> float:
        if tech in self.existing:
            return float(self.existing[tech])
        return float(self.catalog[tech].capacity_existing)
