"""Build the capacity-expansion + dispatch LP for one municipality.

One model covers one scenario and one fixed drilling-depth option (or none).
Costs are total annual costs: annuitized investment in new capacity, fixed
and variable operation, minus sales revenue (lithium carbonate enters the
objective as a negative cost on brine utilization). Time structure comes
from a :class:`~geolith.tsagg.TypicalPeriods` aggregation; periods couple
only through capacity variables, which keeps the model block-angular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from geolith.core.types import (
    COMMODITIES,
    ELECTRICITY,
    GEOTHERMAL_HEAT_COMMODITIES,
    DleParams,
    EconomicSettings,
    Municipality,
    Scenario,
    TechnologySpec,
)
from geolith.dle import lithium_rate
from geolith.errors import GeolithError, InfeasibleModelError
from geolith.esom.model import LpModel, RowMeta, VariableMeta
from geolith.geothermal import DepthOption
from geolith.tsagg import TypicalPeriods, aggregate

DEMAND_PREFIX = "demand:"
PROFILE_PREFIX = "profile:"

ORC_TECH = "geothermal_orc"
DHP_TECH = "geothermal_dhp"


def annuity_factor(interest: float, lifetime: float) -> float:
    """Capital recovery factor: i(1+i)^n / ((1+i)^n - 1), with the zero-
    interest limit 1/n below i = 1e-9."""
    if interest < 0:
        raise GeolithError("interest must be >= 0")
    if lifetime < 1:
        raise GeolithError("lifetime must be >= 1")
    if interest < 1e-9:
        return 1.0 / lifetime
    growth = (1.0 + interest) ** lifetime
    return interest * growth / (growth - 1.0)


def aggregate_municipality(
    muni: Municipality,
    n_periods: int = 60,
    n_segments: int = 16,
    peak_pin: bool = False,
) -> TypicalPeriods:
    """Aggregate all demand and availability series of a municipality
    jointly, so one clustering drives the whole model."""
    series = {DEMAND_PREFIX + name: ts for name, ts in muni.demand.items()}
    series.update({PROFILE_PREFIX + name: ts for name, ts in muni.profiles.items()})
    peaks = tuple(
        DEMAND_PREFIX + name
        for name, ts in muni.demand.items()
        if peak_pin and ts.annual_sum > 0
    )
    return aggregate(series, n_periods, n_segments, peak_attributes=peaks)


@dataclass
class TechEntry:
    """Bookkeeping for one technology's variables in the model."""

    spec: TechnologySpec
    cap_var: int
    existing: float
    annuity: float
    dispatch: Optional[np.ndarray] = None  # (P, S) variable ids
    charge: Optional[np.ndarray] = None
    discharge: Optional[np.ndarray] = None
    soc: Optional[np.ndarray] = None


@dataclass
class GeoEntry:
    """Bookkeeping for the geothermal block."""

    depth: DepthOption
    phi: np.ndarray  # (P, S)
    orc_dispatch: Optional[np.ndarray]
    dhp_dispatch: Dict[str, np.ndarray]
    cap_orc: Optional[int]
    cap_dhp: Optional[int]
    orc_spec: Optional[TechnologySpec]
    dhp_spec: Optional[TechnologySpec]
    orc_annuity: float
    dhp_annuity: float
    drilling_annuity: float
    dle_annuity: float
    li_rate_mg_s: float
    carbonate_t_per_hour: float
    dle: DleParams
    # Triplet positions of the brine-budget coefficients; lets the depth
    # sweep repoint one built model at another candidate in O(P*S).
    phi_entry_ids: list = field(default_factory=list)


@dataclass
class BuildContext:
    """Everything the accounting step needs to interpret a solution."""

    municipality: str
    scenario: str
    dle_enabled: bool
    econ: EconomicSettings
    agg: TypicalPeriods
    scale: np.ndarray  # (P, S) annual hours represented by each step
    commodities: tuple
    demand: Dict[str, np.ndarray]
    techs: Dict[str, TechEntry] = field(default_factory=dict)
    geo: Optional[GeoEntry] = None


def _effective_bounds(muni: Municipality, name: str) -> tuple[float, float]:
    spec = muni.catalog[name]
    existing = muni.capacity_existing(name)
    cap_max = muni.capacity_max(name)
    lower = max(existing, spec.capacity_min)
    return lower, max(cap_max, lower)


def _commodity_set(muni: Municipality) -> tuple:
    """Commodities needing a balance: demanded ones plus, transitively, the
    inputs of every conversion that could serve them."""
    active = {c for c, ts in muni.demand.items() if ts.annual_sum > 0}
    changed = True
    while changed:
        changed = False
        for name, spec in muni.catalog.items():
            if spec.kind != "conversion" or spec.output not in active:
                continue
            if muni.capacity_max(name) <= 0 and muni.capacity_existing(name) <= 0:
                continue
            for commodity in spec.input_shares:
                if commodity in COMMODITIES and commodity not in active:
                    active.add(commodity)
                    changed = True
    return tuple(c for c in COMMODITIES if c in active)


def _check_supply_reachability(
    muni: Municipality, commodities: tuple, depth: Optional[DepthOption]
) -> None:
    """Fail fast when a demanded commodity has no possible supply path."""
    producible: set = set()
    geo_budget = depth is not None and depth.max_thermal_power > 0
    if geo_budget and ORC_TECH in muni.catalog and muni.capacity_max(ORC_TECH) > 0:
        producible.add(ELECTRICITY)
    if geo_budget and DHP_TECH in muni.catalog and muni.capacity_max(DHP_TECH) > 0:
        producible.update(c for c in GEOTHERMAL_HEAT_COMMODITIES if c in commodities)
    changed = True
    while changed:
        changed = False
        for name, spec in muni.catalog.items():
            if name in (ORC_TECH, DHP_TECH):
                continue
            cap = max(muni.capacity_max(name), muni.capacity_existing(name))
            if cap <= 0 or spec.output is None or spec.output in producible:
                continue
            if spec.output not in commodities:
                continue
            if spec.kind == "source":
                producible.add(spec.output)
                changed = True
            elif spec.kind == "conversion":
                needed = [c for c in spec.input_shares if c in commodities]
                if all(c in producible for c in needed):
                    producible.add(spec.output)
                    changed = True
    for commodity in commodities:
        ts = muni.demand.get(commodity)
        if ts is not None and ts.annual_sum > 0 and commodity not in producible:
            raise InfeasibleModelError(
                f"demand for '{commodity}' has no available supply technology "
                f"(all potentials zero)"
            )


def build_model(
    muni: Municipality,
    scenario: Scenario,
    depth: Optional[DepthOption],
    agg: TypicalPeriods,
    econ: EconomicSettings,
    dle_enabled: bool = True,
) -> LpModel:
    """Assemble the LP; the returned model carries a ``build_context``."""
    site = scenario.apply_site(muni.site)
    dle = scenario.apply_dle(muni.dle)
    P, S = agg.n_periods, agg.n_segments
    weights = agg.period_weights.astype(float)
    durations = agg.segment_durations.astype(float)
    scale = weights[:, None] * durations  # annual hours per (p, s)

    commodities = _commodity_set(muni)
    _check_supply_reachability(muni, commodities, depth)

    demand_rep: Dict[str, np.ndarray] = {}
    for commodity in commodities:
        key = DEMAND_PREFIX + commodity
        if commodity in muni.demand and key in agg.representative_values:
            demand_rep[commodity] = np.asarray(agg.representative_values[key])
        else:
            demand_rep[commodity] = np.zeros((P, S))

    tag = "nogeo" if depth is None else str(int(depth.depth))
    model = LpModel(f"{muni.name}:{scenario.name}:{tag}")
    ctx = BuildContext(
        municipality=muni.name,
        scenario=scenario.name,
        dle_enabled=dle_enabled,
        econ=econ,
        agg=agg,
        scale=scale,
        commodities=commodities,
        demand=demand_rep,
    )

    def profile_rep(spec: TechnologySpec) -> Optional[np.ndarray]:
        if spec.availability_profile is None:
            return None
        key = PROFILE_PREFIX + spec.availability_profile
        if key not in agg.representative_values:
            raise GeolithError(
                f"aggregation lacks availability profile '{spec.availability_profile}'"
            )
        return np.asarray(agg.representative_values[key])

    # -- capacity variables ----------------------------------------------------
    active: list[str] = []
    for name, spec in muni.catalog.items():
        if name in (ORC_TECH, DHP_TECH):
            continue
        if spec.kind not in ("source", "conversion", "storage"):
            continue
        if spec.output not in commodities:
            continue
        _, upper = _effective_bounds(muni, name)
        if upper <= 0:
            continue
        active.append(name)

    for name in active:
        spec = muni.catalog[name]
        lower, upper = _effective_bounds(muni, name)
        existing = muni.capacity_existing(name)
        ann = annuity_factor(econ.interest_rate, spec.economic_lifetime)
        unit_cost = spec.capex_per_unit * (ann + spec.fixed_opex_share)
        cap = model.add_variable(
            f"cap:{name}", lower, upper, unit_cost,
            VariableMeta(tech=name, kind="capacity"),
        )
        # Existing stock pays fixed opex but never the investment annuity.
        model.objective_constant -= ann * spec.capex_per_unit * existing
        ctx.techs[name] = TechEntry(spec=spec, cap_var=cap, existing=existing, annuity=ann)
        if spec.kind == "storage":
            entry = ctx.techs[name]
            entry.charge = np.empty((P, S), dtype=int)
            entry.discharge = np.empty((P, S), dtype=int)
            entry.soc = np.empty((P, S), dtype=int)
        else:
            ctx.techs[name].dispatch = np.empty((P, S), dtype=int)

    geo = None
    if depth is not None:
        geo = _add_geothermal_entry(
            model, ctx, muni, site, dle, depth, econ, dle_enabled, P, S
        )
        ctx.geo = geo

    # -- per-period variables and rows ------------------------------------------
    for p in range(P):
        balance: Dict[tuple, int] = {}
        for s in range(S):
            for commodity in commodities:
                balance[(commodity, s)] = model.add_row(
                    "=",
                    float(demand_rep[commodity][p, s]),
                    f"bal:{commodity}:{p}:{s}",
                    RowMeta(commodity=commodity, period=p, segment=s, kind="balance"),
                )

        for name in active:
            entry = ctx.techs[name]
            spec = entry.spec
            avail = profile_rep(spec)
            if spec.kind in ("source", "conversion"):
                for s in range(S):
                    x = model.add_variable(
                        f"x:{name}:{p}:{s}", 0.0, math.inf,
                        spec.variable_opex * scale[p, s],
                        VariableMeta(tech=name, period=p, segment=s, kind="dispatch"),
                    )
                    entry.dispatch[p, s] = x
                    row = model.add_row(
                        "<=", 0.0, f"clink:{name}:{p}:{s}",
                        RowMeta(tech=name, period=p, segment=s, kind="capacity_link"),
                    )
                    model.add_coeff(row, x, 1.0)
                    factor = float(avail[p, s]) if avail is not None else 1.0
                    model.add_coeff(row, entry.cap_var, -factor)
                    model.add_coeff(balance[(spec.output, s)], x, 1.0)
                    if spec.kind == "conversion":
                        for commodity, share in spec.input_shares.items():
                            if commodity in commodities:
                                model.add_coeff(
                                    balance[(commodity, s)], x, -share / spec.efficiency
                                )
            else:  # storage
                rho = 1.0 - spec.self_discharge_per_hour
                for s in range(S):
                    ch = model.add_variable(
                        f"ch:{name}:{p}:{s}", 0.0, math.inf, 0.0,
                        VariableMeta(tech=name, period=p, segment=s, kind="charge"),
                    )
                    dis = model.add_variable(
                        f"dis:{name}:{p}:{s}", 0.0, math.inf,
                        spec.variable_opex * scale[p, s],
                        VariableMeta(tech=name, period=p, segment=s, kind="discharge"),
                    )
                    soc = model.add_variable(
                        f"soc:{name}:{p}:{s}", 0.0, math.inf, 0.0,
                        VariableMeta(tech=name, period=p, segment=s, kind="soc"),
                    )
                    entry.charge[p, s] = ch
                    entry.discharge[p, s] = dis
                    entry.soc[p, s] = soc
                    for var, label in ((ch, "chcap"), (dis, "discap")):
                        row = model.add_row(
                            "<=", 0.0, f"{label}:{name}:{p}:{s}",
                            RowMeta(tech=name, period=p, segment=s, kind="power_link"),
                        )
                        model.add_coeff(row, var, 1.0)
                        model.add_coeff(row, entry.cap_var, -1.0 / spec.hours_to_power)
                    row = model.add_row(
                        "<=", 0.0, f"soccap:{name}:{p}:{s}",
                        RowMeta(tech=name, period=p, segment=s, kind="energy_link"),
                    )
                    model.add_coeff(row, soc, 1.0)
                    model.add_coeff(row, entry.cap_var, -1.0)
                    model.add_coeff(balance[(spec.output, s)], ch, -1.0)
                    model.add_coeff(balance[(spec.output, s)], dis, 1.0)
                for s in range(S):
                    nxt = (s + 1) % S
                    dt = float(durations[p, s])
                    row = model.add_row(
                        "=", 0.0, f"socrec:{name}:{p}:{s}",
                        RowMeta(tech=name, period=p, segment=s, kind="soc_recursion"),
                    )
                    model.add_coeff(row, entry.soc[p, nxt], 1.0)
                    model.add_coeff(row, entry.soc[p, s], -(rho**dt))
                    model.add_coeff(row, entry.charge[p, s], -spec.charge_efficiency * dt)
                    model.add_coeff(
                        row, entry.discharge[p, s], dt / spec.discharge_efficiency
                    )

        if geo is not None:
            _add_geothermal_rows(model, geo, balance, p, S, scale)

    model.build_context = ctx
    model.validate()
    return model


def _add_geothermal_entry(
    model: LpModel,
    ctx: BuildContext,
    muni: Municipality,
    site,
    dle: DleParams,
    depth: DepthOption,
    econ: EconomicSettings,
    dle_enabled: bool,
    P: int,
    S: int,
) -> GeoEntry:
    orc_spec = muni.catalog.get(ORC_TECH)
    dhp_spec = muni.catalog.get(DHP_TECH)
    commodities = ctx.commodities

    cap_orc = None
    orc_annuity = 0.0
    orc_dispatch = None
    if (
        orc_spec is not None
        and ELECTRICITY in commodities
        and muni.capacity_max(ORC_TECH) > 0
        and depth.max_thermal_power > 0
    ):
        orc_annuity = annuity_factor(econ.interest_rate, orc_spec.economic_lifetime)
        cap_orc = model.add_variable(
            f"cap:{ORC_TECH}", 0.0, muni.capacity_max(ORC_TECH),
            orc_spec.capex_per_unit * (orc_annuity + orc_spec.fixed_opex_share),
            VariableMeta(tech=ORC_TECH, kind="capacity"),
        )
        orc_dispatch = np.empty((P, S), dtype=int)

    dhp_commodities = [c for c in GEOTHERMAL_HEAT_COMMODITIES if c in commodities]
    cap_dhp = None
    dhp_annuity = 0.0
    dhp_dispatch: Dict[str, np.ndarray] = {}
    if (
        dhp_spec is not None
        and dhp_commodities
        and muni.capacity_max(DHP_TECH) > 0
        and depth.max_thermal_power > 0
    ):
        dhp_annuity = annuity_factor(econ.interest_rate, dhp_spec.economic_lifetime)
        cap_dhp = model.add_variable(
            f"cap:{DHP_TECH}", 0.0, muni.capacity_max(DHP_TECH),
            dhp_spec.capex_per_unit * (dhp_annuity + dhp_spec.fixed_opex_share),
            VariableMeta(tech=DHP_TECH, kind="capacity"),
        )
        dhp_dispatch = {c: np.empty((P, S), dtype=int) for c in dhp_commodities}

    rate = lithium_rate(site.flow_rate, site.li_concentration, dle.extraction_efficiency)
    carbonate_t_per_hour = rate * 3600.0 * 1e-9 * dle.li_to_carbonate_factor
    dle_annuity = (
        dle.capex * annuity_factor(econ.interest_rate, econ.dle_lifetime)
        if dle_enabled
        else 0.0
    )
    model.objective_constant += dle_annuity

    phi = np.empty((P, S), dtype=int)
    margin = dle.carbonate_price - dle.opex_per_tonne
    for p in range(P):
        for s in range(S):
            credit = (
                -margin * carbonate_t_per_hour * ctx.scale[p, s] if dle_enabled else 0.0
            )
            phi[p, s] = model.add_variable(
                f"phi:{p}:{s}", 0.0, 1.0, credit,
                VariableMeta(tech="brine_loop", period=p, segment=s, kind="utilization"),
            )

    return GeoEntry(
        depth=depth,
        phi=phi,
        orc_dispatch=orc_dispatch,
        dhp_dispatch=dhp_dispatch,
        cap_orc=cap_orc,
        cap_dhp=cap_dhp,
        orc_spec=orc_spec,
        dhp_spec=dhp_spec,
        orc_annuity=orc_annuity,
        dhp_annuity=dhp_annuity,
        drilling_annuity=depth.drilling_cost_total
        * annuity_factor(econ.interest_rate, econ.well_lifetime),
        dle_annuity=dle_annuity,
        li_rate_mg_s=rate,
        carbonate_t_per_hour=carbonate_t_per_hour,
        dle=dle,
    )


def _add_geothermal_rows(
    model: LpModel,
    geo: GeoEntry,
    balance: Dict[tuple, int],
    p: int,
    S: int,
    scale: np.ndarray,
) -> None:
    for s in range(S):
        cascade = model.add_row(
            "<=", 0.0, f"cascade:{p}:{s}",
            RowMeta(tech="brine_loop", period=p, segment=s, kind="cascade"),
        )
        model.add_coeff(cascade, geo.phi[p, s], -geo.depth.max_thermal_power)

        if geo.cap_orc is not None:
            x = model.add_variable(
                f"x:{ORC_TECH}:{p}:{s}", 0.0, math.inf,
                geo.orc_spec.variable_opex * scale[p, s],
                VariableMeta(tech=ORC_TECH, period=p, segment=s, kind="dispatch"),
            )
            geo.orc_dispatch[p, s] = x
            model.add_coeff(cascade, x, 1.0 / geo.orc_spec.efficiency)
            model.add_coeff(balance[(ELECTRICITY, s)], x, 1.0)
            row = model.add_row(
                "<=", 0.0, f"clink:{ORC_TECH}:{p}:{s}",
                RowMeta(tech=ORC_TECH, period=p, segment=s, kind="capacity_link"),
            )
            model.add_coeff(row, x, 1.0)
            model.add_coeff(row, geo.cap_orc, -1.0)

        if geo.cap_dhp is not None:
            row = model.add_row(
                "<=", 0.0, f"clink:{DHP_TECH}:{p}:{s}",
                RowMeta(tech=DHP_TECH, period=p, segment=s, kind="capacity_link"),
            )
            model.add_coeff(row, geo.cap_dhp, -1.0)
            for commodity, dispatch in geo.dhp_dispatch.items():
                x = model.add_variable(
                    f"x:{DHP_TECH}:{commodity}:{p}:{s}", 0.0, math.inf,
                    geo.dhp_spec.variable_opex * scale[p, s],
                    VariableMeta(
                        tech=DHP_TECH, commodity=commodity, period=p, segment=s,
                        kind="dispatch",
                    ),
                )
                dispatch[p, s] = x
                model.add_coeff(cascade, x, 1.0 / geo.dhp_spec.efficiency)
                model.add_coeff(balance[(commodity, s)], x, 1.0)
                model.add_coeff(row, x, 1.0)
