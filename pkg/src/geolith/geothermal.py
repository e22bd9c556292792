"""Deep geothermal plant model.

Subsurface temperature from piecewise-linear basin gradients, doublet
drilling costs over discrete depth options, and the two plant equations:
ORC power from the brine temperature drop across the power cycle, and
district-heat output from the drop across the heating plant, both scaled by
volumetric flow, brine density, and heat capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from geolith.core.types import GeoBasinProfile, GeothermalSiteParams
from geolith.errors import GeolithError, InvariantViolation

# Doublet drilling cost model: fixed share plus an exponential length term,
# EUR per well. Length is the straight-line bore length between wellhead and
# the far end of the doublet, sqrt(depth^2 + well_distance^2).
DRILL_FIXED_EUR = 610_000.0
DRILL_COEFF_EUR = 1.015 * 1.198 * 1e6
DRILL_EXP_PER_M = 0.00047894

DEPTH_MIN_M = 1000.0
DEPTH_MAX_M = 5000.0

# Default plant efficiencies: 10 % electric for the ORC, 65 % thermal for
# the district heating plant.
DEFAULT_ETA_EL = 0.10
DEFAULT_ETA_TH = 0.65


@dataclass(frozen=True)
class PlantEfficiencies:
    """Conversion efficiencies of the surface plants."""

    eta_el: float = DEFAULT_ETA_EL
    eta_th: float = DEFAULT_ETA_TH

    def __post_init__(self):
        if not (0.0 < self.eta_el <= 1.0):
            raise InvariantViolation("0 < eta_el <= 1")
        if not (0.0 < self.eta_th <= 1.0):
            raise InvariantViolation("0 < eta_th <= 1")


@dataclass(frozen=True)
class DepthOption:
    """One discrete drilling-depth candidate and its derived quantities."""

    depth: float  # m
    wellhead_temperature: float  # degC, after any cap
    drilling_cost_total: float  # EUR, both wells
    max_thermal_power: float  # kW_th extractable down to the injection floor

    def __post_init__(self):
        if not (DEPTH_MIN_M <= self.depth <= DEPTH_MAX_M):
            raise InvariantViolation("1000 <= depth <= 5000")
        if self.drilling_cost_total <= 0.0:
            raise InvariantViolation("drilling cost > 0")
        if self.max_thermal_power < 0.0:
            raise InvariantViolation("max_thermal_power >= 0")


def wellhead_temperature(
    depth: float, basin: GeoBasinProfile, cap: Optional[float] = None
) -> float:
    """Brine temperature at the production wellhead for a drilling depth.

    Integrates the basin's piecewise-constant gradient from the surface down
    to ``depth`` (m). Continuous and non-decreasing in depth. When ``cap`` is
    given, the result is clipped to it, so drilling past the cap-saturation
    depth buys no additional temperature.
    """
    if depth < 0:
        raise GeolithError(f"depth must be >= 0, got {depth}")
    if depth > basin.max_covered_depth:
        raise GeolithError(
            f"depth {depth} m exceeds basin profile coverage "
            f"({basin.max_covered_depth} m)"
        )
    temperature = basin.surface_temperature
    previous_bound = 0.0
    for bound, gradient in basin.layers:
        if depth <= previous_bound:
            break
        segment = min(depth, bound) - previous_bound
        temperature += gradient * segment / 1000.0
        previous_bound = bound
    if cap is not None:
        temperature = min(temperature, cap)
    return temperature


def drilling_cost(
    depth: float, well_distance: float, second_well_factor: float
) -> float:
    """Total drilling cost in EUR for a production/injection doublet.

    Per-well cost grows exponentially with the bore length
    ``L = sqrt(depth^2 + well_distance^2)``; the second well benefits from
    economies of scale and costs ``second_well_factor`` times the first.
    """
    if depth < 0 or well_distance < 0:
        raise GeolithError("depth and well distance must be >= 0")
    length = math.hypot(depth, well_distance)
    per_well = DRILL_FIXED_EUR + DRILL_COEFF_EUR * math.exp(DRILL_EXP_PER_M * length)
    return per_well * (1.0 + second_well_factor)


def orc_power(
    flow: float,
    density: float,
    heat_capacity: float,
    t_wellhead: float,
    t_orc: float,
    eta_el: float = DEFAULT_ETA_EL,
) -> float:
    """Electric output of the ORC plant in kW.

    ``flow`` l/s, ``density`` kg/l, ``heat_capacity`` kJ/(kg K); the plant
    converts the brine enthalpy drop from ``t_wellhead`` to ``t_orc`` with
    electric efficiency ``eta_el``.
    """
    if t_orc > t_wellhead:
        raise GeolithError(
            f"ORC outlet temperature {t_orc} exceeds wellhead temperature {t_wellhead}"
        )
    return flow * density * heat_capacity * (t_wellhead - t_orc) * eta_el


def dhp_heat(
    flow: float,
    density: float,
    heat_capacity: float,
    t_orc: float,
    t_dhp: float,
    eta_th: float = DEFAULT_ETA_TH,
    min_injection: float = 50.0,
) -> float:
    """Heat output of the district heating plant in kW_th.

    The brine is cooled from ``t_orc`` (its temperature after the ORC stage,
    or the wellhead temperature without one) to ``t_dhp``, which may not fall
    below the injection floor.
    """
    if t_dhp < min_injection:
        raise GeolithError(
            f"district-heating outlet temperature {t_dhp} below the "
            f"{min_injection} degC injection floor"
        )
    if t_dhp > t_orc:
        raise GeolithError(
            f"district-heating outlet temperature {t_dhp} exceeds inlet {t_orc}"
        )
    return flow * density * heat_capacity * (t_orc - t_dhp) * eta_th


def max_extractable_power(site: GeothermalSiteParams, t_wellhead: float) -> float:
    """Thermal budget of the brine loop in kW_th: full flow cooled from the
    wellhead temperature down to the injection floor. Zero when the wellhead
    is no hotter than the floor."""
    spread = t_wellhead - site.min_injection_temperature
    if spread <= 0.0:
        return 0.0
    return site.flow_rate * site.brine_density * site.brine_heat_capacity * spread


def enumerate_depth_options(
    site: GeothermalSiteParams,
    efficiencies: PlantEfficiencies | None = None,
) -> List[DepthOption]:
    """All discrete drilling-depth candidates for a site, shallowest first.

    Depths run from 1000 m to ``site.max_depth`` in steps of
    ``site.depth_step``. Each option carries the (possibly capped) wellhead
    temperature, the doublet drilling cost, and the thermal budget available
    to the surface plants.
    """
    del efficiencies  # budget is defined on the brine side; kept for API symmetry
    options: List[DepthOption] = []
    n_steps = int(math.floor((site.max_depth - DEPTH_MIN_M) / site.depth_step + 1e-9))
    for i in range(n_steps + 1):
        depth = DEPTH_MIN_M + i * site.depth_step
        t_pw = wellhead_temperature(depth, site.basin, cap=site.wellhead_temperature_cap)
        options.append(
            DepthOption(
                depth=depth,
                wellhead_temperature=t_pw,
                drilling_cost_total=drilling_cost(
                    depth, site.well_distance, site.second_well_cost_factor
                ),
                max_thermal_power=max_extractable_power(site, t_pw),
            )
        )
    return options
