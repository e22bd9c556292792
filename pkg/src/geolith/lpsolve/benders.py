"""Decomposed solve strategy for block-structured models.

Dispatch models built on typical periods are block-angular: periods couple
only through capacity (linking) variables. This solver iterates between a
master problem over the linking variables (plus one value-function variable
per period, tightened by supporting cuts) and per-period dispatch
subproblems solved with warm-started simplex instances. Values converge to
the monolithic optimum; the assembled solution is primal feasible for the
original model.

The strategy produces no row duals; callers needing duals use the direct
simplex.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from geolith.errors import SolverError
from geolith.esom.model import SENSE_GE, LpModel, VariableMeta
from geolith.lpsolve.simplex import PersistentSimplex, solve_simplex
from geolith.lpsolve.solution import (
    CUTOFF,
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    Basis,
    LpSolution,
    SolveOptions,
)


@dataclass
class _Block:
    period: int
    var_idx: np.ndarray  # original variable indices
    row_idx: np.ndarray  # original row indices
    sub: LpModel
    rhs_base: np.ndarray
    link_matrix: sp.csr_matrix  # rows x linking vars
    solver: PersistentSimplex | None = None
    theta_lb: float = 0.0


@dataclass
class BendersCarry:
    """Reusable warm-start state across structurally identical models."""

    sub_bases: dict = field(default_factory=dict)
    capacities: np.ndarray | None = None


def _theta_lower_bound(sub: LpModel) -> float:
    """Safe lower bound on a block's cost: negative-cost variables pushed to
    their upper bounds. Infinite if such a variable is unbounded."""
    total = 0.0
    for obj, ub in zip(sub.var_obj, sub.var_ub):
        if obj < 0.0:
            if math.isinf(ub):
                return -math.inf
            total += obj * ub
    return total


def solve_benders(
    model: LpModel,
    options: SolveOptions | None = None,
    carry: BendersCarry | None = None,
) -> LpSolution:
    """Solve a block-angular model by capacity/dispatch decomposition.

    Falls back to the direct simplex when the model has no block structure.
    ``carry`` (from a previous structurally identical solve) seeds subproblem
    bases and the initial capacity point.
    """
    options = options or SolveOptions()
    structure = model.block_structure()
    if structure is None or not structure[1]:
        return solve_simplex(model, options)
    linking_vars, period_vars, period_rows, linking_rows = structure
    started = time.perf_counter()

    lb, ub, obj, senses, rhs = model.arrays()
    A_csr = model.matrix().tocsr()
    link_cols = np.asarray(linking_vars, dtype=int)

    # -- per-period blocks ----------------------------------------------------
    blocks: list[_Block] = []
    for period in sorted(period_vars):
        vids = np.asarray(period_vars[period], dtype=int)
        rids = np.asarray(period_rows.get(period, []), dtype=int)
        sub = LpModel(f"{model.name}:p{period}")
        col_of = {int(j): k for k, j in enumerate(vids)}
        for k, j in enumerate(vids):
            sub.add_variable(model.var_names[j], lb[j], ub[j], obj[j])
        sub_rows = A_csr[rids]
        block_part = sub_rows[:, vids]
        link_part = sub_rows[:, link_cols].tocsr()
        for r, i in enumerate(rids):
            sub.add_row(model.row_sense[i], rhs[i], model.row_names[i])
        coo = block_part.tocoo()
        for r, c, v in zip(coo.row, coo.col, coo.data):
            sub.add_coeff(int(r), int(c), float(v))
        block = _Block(
            period=period,
            var_idx=vids,
            row_idx=rids,
            sub=sub,
            rhs_base=rhs[rids].copy(),
            link_matrix=link_part,
            theta_lb=_theta_lower_bound(sub),
        )
        if math.isinf(block.theta_lb):
            return solve_simplex(model, options)
        blocks.append(block)

    sub_options = SolveOptions(
        feasibility_tol=options.feasibility_tol,
        optimality_tol=options.optimality_tol,
        compute_duals=True,
    )

    # -- master ---------------------------------------------------------------
    master = LpModel(f"{model.name}:master")
    for j in link_cols:
        master.add_variable(model.var_names[j], lb[j], ub[j], obj[j], VariableMeta())
    theta_of = {}
    for block in blocks:
        theta_of[block.period] = master.add_variable(
            f"theta_p{block.period}", block.theta_lb, math.inf, 1.0
        )
    for i in linking_rows:
        r = master.add_row(model.row_sense[i], rhs[i], model.row_names[i])
        row = A_csr[i]
        for j, v in zip(row.indices, row.data):
            pos = np.searchsorted(link_cols, j)
            if pos >= link_cols.size or link_cols[pos] != j:
                raise SolverError("linking row touches a period variable")
            master.add_coeff(r, int(pos), float(v))

    n_link = link_cols.size
    carry = carry if carry is not None else BendersCarry()

    def solve_block(block: _Block, capacities: np.ndarray) -> LpSolution:
        shift = block.link_matrix @ capacities
        if block.solver is None:
            if block.period in carry.sub_bases:
                sub_options_warm = SolveOptions(
                    feasibility_tol=options.feasibility_tol,
                    optimality_tol=options.optimality_tol,
                    compute_duals=True,
                    warm_basis=carry.sub_bases[block.period],
                )
            else:
                sub_options_warm = sub_options
            for r in range(block.sub.n_rows):
                block.sub.row_rhs[r] = float(block.rhs_base[r] - shift[r])
            block.solver = PersistentSimplex(block.sub, sub_options_warm)
            return block.solver.solve()
        return block.solver.solve(block.rhs_base - shift)

    best_ub = math.inf
    best_caps: np.ndarray | None = None
    best_sub_x: dict[int, np.ndarray] = {}
    lower = -math.inf
    master_basis: Basis | None = None
    iterations = 0
    total_pivots = 0

    if carry.capacities is not None and carry.capacities.size == n_link:
        seed_caps = np.clip(carry.capacities, lb[link_cols], ub[link_cols])
    else:
        seed_caps = None

    for iteration in range(options.benders_max_iterations):
        iterations = iteration + 1
        if iteration == 0 and seed_caps is not None:
            capacities = seed_caps
            theta_vals = np.full(len(blocks), -math.inf)
        else:
            master_options = SolveOptions(
                feasibility_tol=options.feasibility_tol,
                optimality_tol=options.optimality_tol,
                compute_duals=False,
                warm_basis=master_basis,
            )
            msol = solve_simplex(master, master_options)
            total_pivots += msol.iterations
            if msol.status == UNBOUNDED:
                return LpSolution(status=UNBOUNDED, objective=-math.inf)
            if msol.status == INFEASIBLE:
                return LpSolution(status=INFEASIBLE, iterations=total_pivots)
            if msol.status != OPTIMAL:
                return LpSolution(status=msol.status, iterations=total_pivots)
            master_basis = msol.basis
            capacities = msol.x[:n_link]
            theta_vals = msol.x[n_link : n_link + len(blocks)]
            lower = msol.objective

        if (
            options.cutoff is not None
            and lower + model.objective_constant > options.cutoff + 1e-12
        ):
            return LpSolution(
                status=CUTOFF,
                objective=math.nan,
                iterations=total_pivots,
                wall_time=time.perf_counter() - started,
                lower_bound=lower + model.objective_constant,
            )

        upper_this = float(obj[link_cols] @ capacities)
        feasible = True
        new_cuts = 0
        for k, block in enumerate(blocks):
            ssol = solve_block(block, capacities)
            total_pivots += ssol.iterations
            carry.sub_bases[block.period] = ssol.basis
            if ssol.status == OPTIMAL:
                upper_this += ssol.objective
                gradient = block.link_matrix.T @ ssol.duals
                theta_k = theta_vals[k] if theta_vals.size else -math.inf
                if ssol.objective > theta_k + max(
                    1e-9, options.benders_gap * max(1.0, abs(ssol.objective))
                ):
                    r = master.add_row(
                        SENSE_GE,
                        float(ssol.objective + gradient @ capacities),
                        f"cut_p{block.period}_{iteration}",
                    )
                    master.add_coeff(r, theta_of[block.period], 1.0)
                    for pos in range(n_link):
                        if gradient[pos] != 0.0:
                            master.add_coeff(r, pos, float(gradient[pos]))
                    new_cuts += 1
            elif ssol.status == INFEASIBLE:
                feasible = False
                gradient = block.link_matrix.T @ ssol.duals
                r = master.add_row(
                    SENSE_GE,
                    float(ssol.infeasibility + gradient @ capacities),
                    f"fcut_p{block.period}_{iteration}",
                )
                for pos in range(n_link):
                    if gradient[pos] != 0.0:
                        master.add_coeff(r, pos, float(gradient[pos]))
                new_cuts += 1
            elif ssol.status == UNBOUNDED:
                return LpSolution(status=UNBOUNDED, objective=-math.inf)
            else:
                raise SolverError(
                    f"subproblem for period {block.period} returned {ssol.status}",
                    total_pivots,
                )

        if feasible and upper_this < best_ub - 1e-12 * max(1.0, abs(upper_this)):
            best_ub = upper_this
            best_caps = capacities.copy()
            best_sub_x = {block.period: carry_sub_primal(block) for block in blocks}

        if master_basis is not None and new_cuts:
            # Grown master: extend the warm basis with the new slack columns.
            old_m = master_basis.basic.size
            add = master.n_rows - old_m
            if add > 0:
                n_master = master.n_vars
                new_slacks = np.arange(n_master + old_m, n_master + master.n_rows)
                master_basis = Basis(
                    basic=np.concatenate([master_basis.basic, new_slacks]),
                    status=np.concatenate(
                        [
                            master_basis.status[: n_master + old_m],
                            np.full(add, 3, dtype=np.int8),
                        ]
                    ),
                )

        gap_ref = max(1.0, abs(best_ub)) if math.isfinite(best_ub) else 1.0
        converged = False
        if feasible and best_ub - lower <= options.benders_gap * gap_ref:
            converged = True
        elif feasible and not new_cuts:
            converged = True  # every block value supported: master is exact
        if converged:
            break
    else:
        if best_caps is None:
            return LpSolution(status=ITERATION_LIMIT, iterations=total_pivots)
        converged = False

    if best_caps is None:
        return LpSolution(status=INFEASIBLE, iterations=total_pivots)

    carry.capacities = best_caps.copy()
    x = np.zeros(model.n_vars)
    x[link_cols] = best_caps
    for block in blocks:
        x[block.var_idx] = best_sub_x[block.period]
    objective = float(obj @ x) + model.objective_constant
    return LpSolution(
        status=OPTIMAL if converged else ITERATION_LIMIT,
        objective=objective,
        x=x,
        duals=None,
        iterations=total_pivots,
        wall_time=time.perf_counter() - started,
        lower_bound=lower + model.objective_constant,
    )


def carry_sub_primal(block: _Block) -> np.ndarray:
    """Current primal point of a block's persistent solver."""
    core = block.solver._core
    x_full = core._nonbasic_values()
    x_full[core.basic] = core.xb
    return x_full[: core.n] * core.col_scale
