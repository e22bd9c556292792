"""Turn a raw LP solution into per-technology annual cost accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import numpy as np

from geolith.dle import LithiumOutput, annualize
from geolith.errors import SolverError
from geolith.esom.build import DHP_TECH, ORC_TECH, BuildContext
from geolith.esom.model import LpModel
from geolith.geothermal import DepthOption
from geolith.lpsolve.solution import OPTIMAL, LpSolution
from geolith.tsagg import TypicalPeriods

WELLS_COMPONENT = "geothermal_wells"
LITHIUM_COMPONENT = "lithium_carbonate"


@dataclass(frozen=True)
class TechBreakdown:
    """Annual cost components of one technology (EUR/a); revenue is negative."""

    capex_annuity: float = 0.0
    fixed_opex: float = 0.0
    variable_opex: float = 0.0
    revenue: float = 0.0

    @property
    def total(self) -> float:
        return self.capex_annuity + self.fixed_opex + self.variable_opex + self.revenue


@dataclass
class SolvedSystem:
    """Optimized capacities, dispatch, and cost accounting for one run."""

    municipality: str
    scenario: str
    dle_enabled: bool
    status: str
    tac_total: float
    objective_lp: float
    capacities: Dict[str, float]
    dispatch: Dict[str, np.ndarray]
    storage_charge: Dict[str, np.ndarray]
    storage_discharge: Dict[str, np.ndarray]
    storage_soc: Dict[str, np.ndarray]
    brine_utilization: Optional[np.ndarray]
    tac_breakdown: Dict[str, TechBreakdown]
    lithium: LithiumOutput
    depth: Optional[DepthOption]
    aggregation: TypicalPeriods
    solver_iterations: int = 0
    wall_time: float = 0.0
    commodities: tuple = ()
    demand: Mapping[str, np.ndarray] = field(default_factory=dict)

    @property
    def geothermal_built(self) -> bool:
        return self.depth is not None

    def capacity(self, tech: str) -> float:
        return self.capacities.get(tech, 0.0)

    def generation(self, tech: str) -> float:
        """Annual output of a technology in kWh/a."""
        scale = (
            self.aggregation.period_weights[:, None]
            * self.aggregation.segment_durations
        )
        if tech in self.dispatch:
            return float((self.dispatch[tech] * scale).sum())
        if tech in self.storage_discharge:
            return float((self.storage_discharge[tech] * scale).sum())
        return 0.0


def account(solution: LpSolution, model: LpModel) -> SolvedSystem:
    """Build the :class:`SolvedSystem` view of an optimal solution.

    The drilling cost of the chosen depth option enters here as a constant
    annuity; it never affects the inner LP's optimum for a fixed depth.
    """
    ctx: BuildContext = model.build_context
    if solution.status != OPTIMAL:
        raise SolverError(
            f"cannot account a solution with status '{solution.status}'"
        )
    x = np.asarray(solution.x)
    scale = ctx.scale

    capacities: Dict[str, float] = {}
    dispatch: Dict[str, np.ndarray] = {}
    storage_charge: Dict[str, np.ndarray] = {}
    storage_discharge: Dict[str, np.ndarray] = {}
    storage_soc: Dict[str, np.ndarray] = {}
    breakdown: Dict[str, TechBreakdown] = {}

    for name, entry in ctx.techs.items():
        cap = float(x[entry.cap_var])
        capacities[name] = cap
        spec = entry.spec
        capex_ann = entry.annuity * spec.capex_per_unit * max(cap - entry.existing, 0.0)
        fixed = spec.fixed_opex_share * spec.capex_per_unit * cap
        if entry.dispatch is not None:
            values = x[entry.dispatch]
            dispatch[name] = values
            varop = float(spec.variable_opex * (values * scale).sum())
        else:
            charge = x[entry.charge]
            discharge = x[entry.discharge]
            storage_charge[name] = charge
            storage_discharge[name] = discharge
            storage_soc[name] = x[entry.soc]
            varop = float(spec.variable_opex * (discharge * scale).sum())
        breakdown[name] = TechBreakdown(
            capex_annuity=capex_ann, fixed_opex=fixed, variable_opex=varop
        )

    lithium = LithiumOutput.zero()
    phi = None
    depth = None
    geo = ctx.geo
    if geo is not None:
        depth = geo.depth
        phi = x[geo.phi]
        if geo.cap_orc is not None:
            cap = float(x[geo.cap_orc])
            capacities[ORC_TECH] = cap
            values = x[geo.orc_dispatch]
            dispatch[ORC_TECH] = values
            breakdown[ORC_TECH] = TechBreakdown(
                capex_annuity=geo.orc_annuity * geo.orc_spec.capex_per_unit * cap,
                fixed_opex=geo.orc_spec.fixed_opex_share
                * geo.orc_spec.capex_per_unit
                * cap,
                variable_opex=float(
                    geo.orc_spec.variable_opex * (values * scale).sum()
                ),
            )
        if geo.cap_dhp is not None:
            cap = float(x[geo.cap_dhp])
            capacities[DHP_TECH] = cap
            total = np.zeros_like(scale)
            for values in geo.dhp_dispatch.values():
                total = total + x[values]
            dispatch[DHP_TECH] = total
            breakdown[DHP_TECH] = TechBreakdown(
                capex_annuity=geo.dhp_annuity * geo.dhp_spec.capex_per_unit * cap,
                fixed_opex=geo.dhp_spec.fixed_opex_share
                * geo.dhp_spec.capex_per_unit
                * cap,
                variable_opex=float(
                    geo.dhp_spec.variable_opex * (total * scale).sum()
                ),
            )
        breakdown[WELLS_COMPONENT] = TechBreakdown(capex_annuity=geo.drilling_annuity)
        if ctx.dle_enabled:
            # Equivalent full-utilization hours of the brine loop drive the
            # annual lithium mass balance.
            full_hours = float((phi * scale).sum())
            li_t, carb_t = annualize(geo.li_rate_mg_s, min(full_hours, 8766.0))
            lithium = LithiumOutput(
                li_mass_rate=geo.li_rate_mg_s,
                annual_li=li_t,
                annual_carbonate=carb_t,
                revenue=carb_t * geo.dle.carbonate_price,
                dle_opex=carb_t * geo.dle.opex_per_tonne,
            )
            breakdown[LITHIUM_COMPONENT] = TechBreakdown(
                capex_annuity=geo.dle_annuity,
                variable_opex=lithium.dle_opex,
                revenue=-lithium.revenue,
            )

    # By construction tac_total == solution.objective + drilling annuity;
    # tests assert the reconciliation against the raw solution vector.
    tac_total = float(sum(item.total for item in breakdown.values()))

    return SolvedSystem(
        municipality=ctx.municipality,
        scenario=ctx.scenario,
        dle_enabled=ctx.dle_enabled,
        status=solution.status,
        tac_total=tac_total,
        objective_lp=solution.objective,
        capacities=capacities,
        dispatch=dispatch,
        storage_charge=storage_charge,
        storage_discharge=storage_discharge,
        storage_soc=storage_soc,
        brine_utilization=phi,
        tac_breakdown=breakdown,
        lithium=lithium,
        depth=depth,
        aggregation=ctx.agg,
        solver_iterations=solution.iterations,
        wall_time=solution.wall_time,
        commodities=ctx.commodities,
        demand=ctx.demand,
    )
