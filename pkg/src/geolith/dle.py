"""Direct lithium extraction: mass balance, carbonate economics, and
downstream impact metrics (battery packs, CO2 abatement)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Tuple

from geolith.core.types import LI_TO_CARBONATE
from geolith.errors import InvariantViolation

# Upper bound on operating hours: one calendar year including leap slack.
MAX_OPERATING_HOURS = 8766.0


@dataclass(frozen=True)
class LithiumOutput:
    """Annual lithium production and the money attached to it."""

    li_mass_rate: float  # mg/s at reference flow
    annual_li: float  # t/a elemental lithium
    annual_carbonate: float  # t/a Li2CO3
    revenue: float  # EUR/a
    dle_opex: float  # EUR/a

    def __post_init__(self):
        if self.annual_li > 0:
            ratio = self.annual_carbonate / (self.annual_li * LI_TO_CARBONATE)
            if abs(ratio - 1.0) > 1e-9:
                raise InvariantViolation("annual_carbonate == annual_li * 5.324")
        elif self.annual_carbonate != 0.0:
            raise InvariantViolation("annual_carbonate == annual_li * 5.324")
        for name in ("li_mass_rate", "annual_li", "annual_carbonate", "revenue", "dle_opex"):
            if getattr(self, name) < 0:
                raise InvariantViolation(f"{name} >= 0")

    @staticmethod
    def zero() -> "LithiumOutput":
        return LithiumOutput(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ImpactFactors:
    """Factors for translating carbonate tonnage into headline metrics.

    ``comparison_footprints`` lists carbon footprints of conventional supply
    routes (kg CO2eq per kg Li2CO3-equivalent) selectable for comparison
    reports; the default ``abatement_factor`` corresponds to displacing
    hard-rock production.
    """

    kg_li_per_pack: float = 8.0
    reference_ev_registrations: float = 1_700_000.0
    abatement_factor: float = 15.8
    comparison_footprints: Mapping[str, float] = field(
        default_factory=lambda: {
            "salar": 0.3,
            "brine_lifecycle": 3.2,
            "hardrock": 15.8,
        }
    )

    def __post_init__(self):
        if self.kg_li_per_pack <= 0:
            raise InvariantViolation("kg_li_per_pack > 0")
        if self.reference_ev_registrations <= 0:
            raise InvariantViolation("reference_ev_registrations > 0")
        if self.abatement_factor <= 0:
            raise InvariantViolation("abatement_factor > 0")
        if any(v <= 0 for v in self.comparison_footprints.values()):
            raise InvariantViolation("comparison footprints > 0")
        object.__setattr__(self, "comparison_footprints", dict(self.comparison_footprints))


def lithium_rate(flow: float, li_concentration: float, efficiency: float) -> float:
    """Elemental lithium recovery rate in mg/s.

    ``flow`` l/s of brine at ``li_concentration`` mg/l, recovered with the
    adsorbent ``efficiency``.
    """
    if flow < 0 or li_concentration < 0:
        raise InvariantViolation("flow, li_concentration >= 0")
    if not (0.0 <= efficiency <= 1.0):
        raise InvariantViolation("0 <= efficiency <= 1")
    return flow * li_concentration * efficiency


def annualize(rate_mg_s: float, operating_hours: float) -> Tuple[float, float]:
    """Annual (t Li, t Li2CO3) from a recovery rate and operating hours."""
    if not (0.0 <= operating_hours <= MAX_OPERATING_HOURS):
        raise InvariantViolation("0 <= operating_hours <= 8766")
    li_tonnes = rate_mg_s * 3600.0 * operating_hours * 1e-9
    return li_tonnes, li_tonnes * LI_TO_CARBONATE


def carbonate_economics(
    carbonate_tonnes: float,
    price: float,
    opex_per_tonne: float,
    capex: float,
    annuity: float,
) -> Tuple[float, float, float, float]:
    """(revenue, opex, annualized capex, net) in EUR/a for a carbonate stream.

    ``annuity`` is the capital recovery factor applied to the plant CAPEX.
    Net may be negative, e.g. an idle plant still pays its annuity.
    """
    if min(carbonate_tonnes, price, opex_per_tonne, capex, annuity) < 0:
        raise InvariantViolation("economics inputs >= 0")
    revenue = carbonate_tonnes * price
    opex = carbonate_tonnes * opex_per_tonne
    annual_capex = capex * annuity
    return revenue, opex, annual_capex, revenue - opex - annual_capex


def battery_packs(
    carbonate_tonnes: float, factors: ImpactFactors | None = None
) -> Tuple[float, float]:
    """EV battery packs manufacturable per year and the share of reference
    annual EV registrations they correspond to."""
    factors = factors or ImpactFactors()
    if carbonate_tonnes < 0:
        raise InvariantViolation("carbonate_tonnes >= 0")
    li_tonnes = carbonate_tonnes / LI_TO_CARBONATE
    packs = li_tonnes / (factors.kg_li_per_pack / 1000.0)
    return packs, packs / factors.reference_ev_registrations


def co2_abatement(
    carbonate_tonnes: float,
    factors: ImpactFactors | None = None,
    route: str | None = None,
) -> float:
    """Avoided CO2 in t/a when this carbonate displaces conventional supply.

    ``route`` selects one of the comparison footprints; default is the
    hard-rock displacement factor.
    """
    factors = factors or ImpactFactors()
    if carbonate_tonnes < 0:
        raise InvariantViolation("carbonate_tonnes >= 0")
    factor = (
        factors.comparison_footprints[route]
        if route is not None
        else factors.abatement_factor
    )
    # t/a * kg CO2 per kg carbonate keeps the unit in tonnes.
    return carbonate_tonnes * factor
