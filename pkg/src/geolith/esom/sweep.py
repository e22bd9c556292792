"""Outer enumeration over discrete drilling-depth options.

The drilling cost curve is nonlinear in depth, so depth cannot sit inside
the LP; instead one LP is solved per candidate depth (plus the no-plant
variant) and the cheapest total wins. Three exact shortcuts keep the sweep
fast without changing the result:

* duplicate thermal budgets collapse: beyond the temperature-cap saturation
  depth every option yields the same LP, so only the shallowest (cheapest)
  is solved;
* when the carbonate margin is positive, full brine utilization is always
  optimal, so the with-extraction and heat-only totals of one depth differ
  by a closed-form constant and one LP covers both plant configurations;
* re-solves are warm-started, and the decomposed strategy aborts a
  candidate as soon as its lower bound proves it cannot beat the incumbent.

Tie-breaking is deterministic: no plant wins ties, then the shallower depth.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from geolith.core.types import EconomicSettings, Municipality, Scenario
from geolith.errors import GeolithError, InfeasibleModelError
from geolith.esom.account import SolvedSystem, account
from geolith.esom.build import annuity_factor, build_model
from geolith.esom.model import LpModel
from geolith.geothermal import DepthOption, enumerate_depth_options
from geolith.lpsolve import BendersCarry, SolveOptions
from geolith.lpsolve import solve as builtin_solve
from geolith.lpsolve.solution import CUTOFF, INFEASIBLE, OPTIMAL, LpSolution
from geolith.tsagg import TypicalPeriods

log = logging.getLogger("geolith.sweep")

SolverFn = Callable[[LpModel, SolveOptions], LpSolution]


@dataclass
class CandidateRecord:
    depth: Optional[float]
    status: str
    tac: Optional[float] = None
    tac_heat_only: Optional[float] = None
    skipped_dominated: bool = False


@dataclass
class DepthSweepResult:
    best: SolvedSystem
    records: List[CandidateRecord] = field(default_factory=list)
    failures: List[Tuple[Optional[float], str]] = field(default_factory=list)


def _dedup_budgets(options: List[DepthOption]) -> List[DepthOption]:
    """Keep the shallowest option per distinct thermal budget. Deeper equal-
    budget options produce the identical LP at strictly higher drilling cost."""
    kept: List[DepthOption] = []
    seen: set = set()
    for option in options:
        key = round(option.max_thermal_power, 9)
        if key in seen:
            continue
        seen.add(key)
        kept.append(option)
    return kept


def _update_depth(model: LpModel, option: DepthOption, well_annuity_rate: float):
    """Repoint a built model at another depth candidate: only the brine
    budget coefficient and the constant drilling annuity change."""
    geo = model.build_context.geo
    for entry_id in geo.phi_entry_ids:
        model.entries_val[entry_id] = -option.max_thermal_power
    geo.depth = option
    geo.drilling_annuity = option.drilling_cost_total * well_annuity_rate


def optimize_with_geothermal(
    muni: Municipality,
    scenario: Scenario,
    agg: TypicalPeriods,
    econ: EconomicSettings,
    solver: Optional[SolverFn] = None,
    dle_enabled: bool = True,
    solve_options: Optional[SolveOptions] = None,
) -> SolvedSystem:
    """Minimum-TAC system over {no plant} + all drilling-depth candidates."""
    return depth_sweep(
        muni, scenario, agg, econ, solver, dle_enabled, solve_options
    ).best


def depth_sweep(
    muni: Municipality,
    scenario: Scenario,
    agg: TypicalPeriods,
    econ: EconomicSettings,
    solver: Optional[SolverFn] = None,
    dle_enabled: bool = True,
    solve_options: Optional[SolveOptions] = None,
) -> DepthSweepResult:
    base_options = solve_options or SolveOptions()
    site = scenario.apply_site(muni.site)
    dle = scenario.apply_dle(muni.dle)
    margin = dle.carbonate_price - dle.opex_per_tonne

    # With a positive margin, full utilization is optimal, so the heat-only
    # total follows from the with-extraction solve in closed form. With a
    # non-positive margin the extraction plant can never pay for itself.
    solve_with_dle = dle_enabled and margin > 0
    carbonate_full = 0.0
    dle_annuity = 0.0
    if solve_with_dle:
        rate = site.flow_rate * site.li_concentration * dle.extraction_efficiency
        carbonate_full = rate * 3600.0 * 1e-9 * dle.li_to_carbonate_factor * 8760.0
        dle_annuity = dle.capex * annuity_factor(econ.interest_rate, econ.dle_lifetime)
    heat_only_delta = margin * carbonate_full - dle_annuity if solve_with_dle else 0.0

    well_rate = annuity_factor(econ.interest_rate, econ.well_lifetime)
    records: List[CandidateRecord] = []
    failures: List[Tuple[Optional[float], str]] = []

    best_tac = float("inf")
    best_config: Tuple[Optional[DepthOption], bool] | None = None  # (depth, with_dle)

    use_builtin = solver is None
    carry = BendersCarry()
    warm_basis = None

    # -- no-plant variant -------------------------------------------------------
    try:
        model0 = build_model(muni, scenario, None, agg, econ, dle_enabled=False)
        sol0 = _solve(model0, base_options, solver, use_builtin, carry=None)
        if sol0.status == OPTIMAL:
            best_tac = sol0.objective
            best_config = (None, False)
            records.append(CandidateRecord(None, sol0.status, tac=sol0.objective))
        else:
            records.append(CandidateRecord(None, sol0.status))
            if sol0.status == INFEASIBLE:
                failures.append((None, "no-plant variant infeasible"))
    except (GeolithError, InfeasibleModelError) as exc:
        records.append(CandidateRecord(None, "error"))
        failures.append((None, str(exc)))

    # -- depth candidates --------------------------------------------------------
    all_options = enumerate_depth_options(site)
    candidates = _dedup_budgets(all_options)
    skipped = len(all_options) - len(candidates)
    if skipped:
        log.debug("collapsed %d depth options with duplicate thermal budgets", skipped)

    template: Optional[LpModel] = None
    for option in candidates:
        try:
            if template is None:
                template = build_model(
                    muni, scenario, option, agg, econ, dle_enabled=solve_with_dle
                )
                _index_phi_entries(template)
            _update_depth(template, option, well_rate)
            drilling = template.build_context.geo.drilling_annuity

            options = _candidate_options(
                base_options, best_tac, drilling, heat_only_delta, use_builtin
            )
            options.warm_basis = warm_basis
            sol = _solve(template, options, solver, use_builtin, carry=carry)
            if sol.status == CUTOFF:
                records.append(
                    CandidateRecord(option.depth, CUTOFF, skipped_dominated=True)
                )
                continue
            if sol.status != OPTIMAL:
                records.append(CandidateRecord(option.depth, sol.status))
                if sol.status not in (INFEASIBLE,):
                    failures.append((option.depth, f"status {sol.status}"))
                continue
            if sol.basis is not None:
                warm_basis = sol.basis

            tac_dle = sol.objective + drilling
            tac_heat = tac_dle + heat_only_delta if solve_with_dle else tac_dle
            record = CandidateRecord(
                option.depth,
                OPTIMAL,
                tac=tac_dle if solve_with_dle else None,
                tac_heat_only=tac_heat,
            )
            records.append(record)
            # Heat-only first: on exact ties the configuration without the
            # extraction plant wins.
            if tac_heat < best_tac - _tie_tol(best_tac):
                best_tac = tac_heat
                best_config = (option, False)
            if solve_with_dle and tac_dle < best_tac - _tie_tol(best_tac):
                best_tac = tac_dle
                best_config = (option, True)
        except GeolithError as exc:
            records.append(CandidateRecord(option.depth, "error"))
            failures.append((option.depth, str(exc)))

    if best_config is None:
        raise InfeasibleModelError(
            f"every depth candidate failed for {muni.name}/{scenario.name}: "
            f"{failures[:3]}"
        )

    # -- final exact solve of the winner ----------------------------------------
    depth_opt, with_dle = best_config
    final_model = build_model(muni, scenario, depth_opt, agg, econ, dle_enabled=with_dle)
    final_sol = _solve(
        final_model,
        base_options,
        solver,
        use_builtin,
        carry=carry if depth_opt is not None else None,
    )
    if final_sol.status != OPTIMAL:
        raise GeolithError(
            f"winner re-solve returned {final_sol.status} for {muni.name}"
        )
    best = account(final_sol, final_model)
    return DepthSweepResult(best=best, records=records, failures=failures)


def _tie_tol(reference: float) -> float:
    return 1e-9 * max(1.0, abs(reference))


def _candidate_options(
    base: SolveOptions,
    best_tac: float,
    drilling: float,
    heat_only_delta: float,
    use_builtin: bool,
) -> SolveOptions:
    options = SolveOptions(
        feasibility_tol=base.feasibility_tol,
        optimality_tol=base.optimality_tol,
        iteration_limit=base.iteration_limit,
        method=base.method,
        benders_max_iterations=base.benders_max_iterations,
        benders_gap=base.benders_gap,
    )
    if use_builtin and best_tac < float("inf"):
        # Candidate is worthless once even its cheaper plant configuration
        # cannot beat the incumbent.
        slack = min(0.0, heat_only_delta)
        options.cutoff = best_tac - drilling - slack
    return options


def _index_phi_entries(model: LpModel) -> None:
    geo = model.build_context.geo
    budget = -geo.depth.max_thermal_power
    phi_cols = set(int(v) for v in geo.phi.ravel())
    ids = [
        k
        for k, (col, val) in enumerate(zip(model.entries_col, model.entries_val))
        if col in phi_cols and val == budget
    ]
    if len(ids) != geo.phi.size:
        raise GeolithError("brine budget coefficients could not be indexed")
    geo.phi_entry_ids = ids


def _solve(
    model: LpModel,
    options: SolveOptions,
    solver: Optional[SolverFn],
    use_builtin: bool,
    carry: Optional[BendersCarry],
) -> LpSolution:
    if use_builtin:
        return builtin_solve(model, options, carry=carry)
    return solver(model, options)
