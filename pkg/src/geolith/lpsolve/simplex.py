"""Bounded-variable revised simplex.

Solves ``min c.x  s.t.  A x (<=,=,>=) b,  l <= x <= u`` on a dense basis
inverse with periodic refactorization. Every row receives a slack column
whose bounds encode the sense, so the all-slack basis is always available
as a cold start. Infeasible starts are repaired by a composite phase 1 that
minimizes the total bound violation of basic variables.

Pivoting is deterministic: Dantzig pricing with lowest-index tie-breaking,
switching to Bland's rule during long degenerate stretches. Geometric-mean
row/column scaling is applied before solving and undone on report, since
energy models mix EUR-millions with kW-scale coefficients.
"""

from __future__ import annotations

import math
import time

import numpy as np
import scipy.sparse as sp

from geolith.errors import SolverError
from geolith.esom.model import SENSE_EQ, SENSE_GE, SENSE_LE, LpModel
from geolith.lpsolve.solution import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    Basis,
    LpSolution,
    SolveOptions,
)

# Nonbasic status codes.
AT_LOWER = 0
AT_UPPER = 1
FREE = 2
BASIC = 3

_PIVOT_TOL = 1e-9
_REFACTOR_EVERY = 150
_DEGENERATE_STREAK = 60


def _geometric_scaling(A: sp.csc_matrix, rounds: int = 6):
    """Iterative geometric-mean scaling factors (rows, columns)."""
    m, n = A.shape
    row_scale = np.ones(m)
    col_scale = np.ones(n)
    if A.nnz == 0:
        return row_scale, col_scale
    work = A.tocoo()
    absval = np.abs(work.data)
    keep = absval > 0
    rows, cols, absval = work.row[keep], work.col[keep], absval[keep]
    for _ in range(rounds):
        scaled = absval * row_scale[rows] * col_scale[cols]
        for idx, size, scale in ((rows, m, row_scale), (cols, n, col_scale)):
            lo = np.full(size, np.inf)
            hi = np.zeros(size)
            np.minimum.at(lo, idx, scaled)
            np.maximum.at(hi, idx, scaled)
            touched = hi > 0
            factor = np.ones(size)
            factor[touched] = 1.0 / np.sqrt(lo[touched] * hi[touched])
            scale *= factor
            scaled = absval * row_scale[rows] * col_scale[cols]
    # Snap to powers of two: exact to undo, no rounding noise.
    row_scale = np.exp2(np.round(np.log2(row_scale)))
    col_scale = np.exp2(np.round(np.log2(col_scale)))
    return row_scale, col_scale


class _Simplex:
    def __init__(self, model: LpModel, options: SolveOptions):
        self.options = options
        lb, ub, obj, senses, rhs = model.arrays()
        A = model.matrix()
        self.m, self.n = A.shape
        m, n = self.m, self.n

        self.row_scale, self.col_scale = _geometric_scaling(A)
        A = (sp.diags(self.row_scale) @ A @ sp.diags(self.col_scale)).tocsc()
        b = rhs * self.row_scale

        # Slack bounds encode the row sense (0 and inf survive scaling).
        slack_lb = np.zeros(m)
        slack_ub = np.zeros(m)
        for i, sense in enumerate(senses):
            if sense == SENSE_LE:
                slack_lb[i], slack_ub[i] = 0.0, math.inf
            elif sense == SENSE_GE:
                slack_lb[i], slack_ub[i] = -math.inf, 0.0
            else:  # SENSE_EQ
                slack_lb[i], slack_ub[i] = 0.0, 0.0

        self.A = sp.hstack([A, sp.eye(m, format="csc")], format="csc")
        self.A.sort_indices()
        self._Aindptr = self.A.indptr
        self._Aindices = self.A.indices
        self._Adata = self.A.data
        self.b = b
        self.lb = np.concatenate([lb / self.col_scale, slack_lb])
        self.ub = np.concatenate([ub / self.col_scale, slack_ub])
        self.c = np.concatenate([obj * self.col_scale, np.zeros(m)])
        self.N = n + m

        self.ftol = options.feasibility_tol
        self.otol = options.optimality_tol
        limit = options.iteration_limit
        self.max_iter = limit if limit is not None else 200 * (m + 1) + 20 * n + 2000

        self.iterations = 0
        self.degenerate_streak = 0
        self.bland = False

    def _column(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._Aindptr[q], self._Aindptr[q + 1]
        return self._Aindices[lo:hi], self._Adata[lo:hi]

    # -- basis machinery ----------------------------------------------------

    def _cold_basis(self):
        self.basic = np.arange(self.n, self.n + self.m)
        self.status = np.empty(self.N, dtype=np.int8)
        finite_lb = np.isfinite(self.lb)
        finite_ub = np.isfinite(self.ub)
        self.status[finite_lb] = AT_LOWER
        self.status[~finite_lb & finite_ub] = AT_UPPER
        self.status[~finite_lb & ~finite_ub] = FREE
        self.status[self.basic] = BASIC
        self.Binv = np.eye(self.m)
        self._recompute_xb()

    def _warm_basis(self, basis: Basis) -> bool:
        basic = np.asarray(basis.basic, dtype=int)
        status = np.asarray(basis.status, dtype=np.int8).copy()
        if basic.size != self.m or status.size != self.N:
            return False
        if np.unique(basic).size != self.m:
            return False
        self.basic = basic.copy()
        self.status = status
        # Repair columns marked basic that are not actually in the basis.
        in_basis = np.zeros(self.N, dtype=bool)
        in_basis[self.basic] = True
        stale = (self.status == BASIC) & ~in_basis
        if stale.any():
            finite_lb = np.isfinite(self.lb)
            self.status[stale & finite_lb] = AT_LOWER
            self.status[stale & ~finite_lb & np.isfinite(self.ub)] = AT_UPPER
            self.status[stale & ~finite_lb & ~np.isfinite(self.ub)] = FREE
        self.status[self.basic] = BASIC
        try:
            self._refactorize()
        except SolverError:
            return False
        return True

    def _refactorize(self):
        B = self.A[:, self.basic].toarray()
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SolverError(
                "singular basis during refactorization", self.iterations
            ) from exc
        self._recompute_xb()

    def _nonbasic_values(self) -> np.ndarray:
        x = np.zeros(self.N)
        at_lower = self.status == AT_LOWER
        at_upper = self.status == AT_UPPER
        x[at_lower] = self.lb[at_lower]
        x[at_upper] = self.ub[at_upper]
        return x

    def _recompute_xb(self):
        x = self._nonbasic_values()
        x[self.basic] = 0.0
        self.xb = self.Binv @ (self.b - self.A @ x)
        self.x_nonbasic = x

    # -- phase handling ------------------------------------------------------

    def _violations(self):
        lo = self.lb[self.basic] - self.xb
        hi = self.xb - self.ub[self.basic]
        return np.where(lo > self.ftol, lo, 0.0), np.where(hi > self.ftol, hi, 0.0)

    def _total_infeasibility(self) -> float:
        viol_lo, viol_hi = self._violations()
        return float(viol_lo.sum() + viol_hi.sum())

    def _phase1_done(self) -> bool:
        return self._total_infeasibility() <= self.ftol * max(1.0, math.sqrt(self.m))

    def _phase_costs(self, phase: int) -> np.ndarray:
        if phase == 2:
            return self.c[self.basic]
        viol_lo, viol_hi = self._violations()
        gamma = np.zeros(self.m)
        gamma[viol_lo > 0] = -1.0
        gamma[viol_hi > 0] = 1.0
        return gamma

    def _duals(self, phase: int) -> np.ndarray:
        return self._phase_costs(phase) @ self.Binv

    def _reduced_costs(self, phase: int) -> np.ndarray:
        y = self._duals(phase)
        d = -(self.A.T @ y)
        if phase == 2:
            d += self.c
        return d

    def _entering(self, d: np.ndarray):
        status = self.status
        up = ((status == AT_LOWER) | (status == FREE)) & (d < -self.otol)
        dn = ((status == AT_UPPER) | (status == FREE)) & (d > self.otol)
        score = np.zeros(self.N)
        score[up] = -d[up]
        score[dn] = np.maximum(score[dn], d[dn])
        eligible = np.flatnonzero(score > 0)
        if eligible.size == 0:
            return None, 0
        if self.bland:
            q = int(eligible[0])
        else:
            best = score[eligible].max()
            q = int(eligible[score[eligible] >= best][0])
        return q, (1 if d[q] < 0 else -1)

    def _ratio_test(self, q: int, direction: int, w: np.ndarray, phase: int):
        """Largest step for the entering variable; returns
        (t, leaving_pos, leaving_bound, flip)."""
        delta = -direction * w
        lbB = self.lb[self.basic]
        ubB = self.ub[self.basic]
        xb = self.xb

        if phase == 1:
            below = xb < lbB - self.ftol
            above = xb > ubB + self.ftol
        else:
            below = above = np.zeros(self.m, dtype=bool)

        moving_up = delta > _PIVOT_TOL
        moving_dn = delta < -_PIVOT_TOL

        # Feasible basics block at the bound they approach; basics beyond a
        # bound block where they re-enter feasibility. A basic moving deeper
        # into violation never blocks (phase-1 pricing accounts for it).
        with np.errstate(divide="ignore", invalid="ignore"):
            t_up = np.where(
                moving_up & ~above, (np.where(below, lbB, ubB) - xb) / delta, math.inf
            )
            t_dn = np.where(
                moving_dn & ~below, (np.where(above, ubB, lbB) - xb) / delta, math.inf
            )
        t_up = np.where(np.isnan(t_up), math.inf, t_up)
        t_dn = np.where(np.isnan(t_dn), math.inf, t_dn)
        t_rows = np.maximum(np.minimum(t_up, t_dn), 0.0)

        t_best = math.inf
        leaving_pos = -1
        leaving_bound = AT_LOWER
        if t_rows.size:
            t_min = float(t_rows.min())
            if math.isfinite(t_min):
                ties = np.flatnonzero(t_rows <= t_min + 1e-12)
                if self.bland:
                    pos = int(ties[np.argmin(self.basic[ties])])
                else:
                    pos = int(ties[np.argmax(np.abs(delta[ties]))])
                t_best = float(t_rows[pos])
                leaving_pos = pos
                if t_up[pos] <= t_dn[pos]:
                    leaving_bound = AT_LOWER if below[pos] else AT_UPPER
                else:
                    leaving_bound = AT_UPPER if above[pos] else AT_LOWER

        flip = False
        span = self.ub[q] - self.lb[q]
        if math.isfinite(span) and span < t_best:
            t_best = span
            flip = True
            leaving_pos = -1
        return t_best, leaving_pos, leaving_bound, flip

    def _pivot(self, q, direction, t, leaving_pos, leaving_bound, flip, w):
        if t != 0.0:
            self.xb -= t * direction * w
        if flip:
            new_status = AT_UPPER if self.status[q] == AT_LOWER else AT_LOWER
            self.status[q] = new_status
            self.x_nonbasic[q] = self.ub[q] if new_status == AT_UPPER else self.lb[q]
            return
        entering_value = self.x_nonbasic[q] + direction * t
        leaving_var = self.basic[leaving_pos]
        wr = w[leaving_pos]
        if abs(wr) < _PIVOT_TOL:
            raise SolverError("pivot element vanished", self.iterations)
        pivot_row = self.Binv[leaving_pos] / wr
        self.Binv -= np.outer(w, pivot_row)
        self.Binv[leaving_pos] = pivot_row
        self.xb[leaving_pos] = entering_value
        self.basic[leaving_pos] = q
        self.status[q] = BASIC
        self.status[leaving_var] = leaving_bound
        self.x_nonbasic[leaving_var] = (
            self.lb[leaving_var] if leaving_bound == AT_LOWER else self.ub[leaving_var]
        )
        self.x_nonbasic[q] = 0.0

    def _run_phase(self, phase: int) -> str:
        since_refactor = 0
        while True:
            if phase == 1 and self._phase1_done():
                return "feasible"
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT
            d = self._reduced_costs(phase)
            q, direction = self._entering(d)
            if q is None:
                if phase == 1:
                    return "feasible" if self._phase1_done() else INFEASIBLE
                return OPTIMAL
            idx, vals = self._column(q)
            w = self.Binv[:, idx] @ vals
            t, leaving_pos, leaving_bound, flip = self._ratio_test(q, direction, w, phase)
            if math.isinf(t):
                return INFEASIBLE if phase == 1 else UNBOUNDED
            self._pivot(q, direction, t, leaving_pos, leaving_bound, flip, w)
            self.iterations += 1
            since_refactor += 1

            if t <= 1e-10:
                self.degenerate_streak += 1
                if self.degenerate_streak >= _DEGENERATE_STREAK:
                    self.bland = True
            else:
                self.degenerate_streak = 0
                self.bland = False

            if since_refactor >= _REFACTOR_EVERY:
                self._refactorize()
                since_refactor = 0

    # -- public entry ---------------------------------------------------------

    def prepare(self):
        warm = self.options.warm_basis
        if warm is None or not self._warm_basis(warm):
            self._cold_basis()

    def set_rhs(self, rhs: np.ndarray):
        """Swap the right-hand side (unscaled) keeping the current basis."""
        self.b = np.asarray(rhs, dtype=float) * self.row_scale
        self._recompute_xb()

    def optimize(self) -> str:
        status = self._run_phase(1)
        if status == "feasible":
            self._refactorize()
            status = self._run_phase(2)
        return status

    def result(self, status: str, started: float) -> LpSolution:
        duals = None
        if self.options.compute_duals:
            phase = 2 if status in (OPTIMAL, UNBOUNDED, ITERATION_LIMIT) else 1
            duals = self._duals(phase) * self.row_scale

        x_full = self._nonbasic_values()
        x_full[self.basic] = self.xb
        x_structural = x_full[: self.n] * self.col_scale
        # Scaled costs dotted with scaled values give the original objective.
        objective = float(np.dot(self.c[: self.n], x_full[: self.n]))
        return LpSolution(
            status=status,
            objective=objective,
            x=x_structural,
            duals=duals,
            iterations=self.iterations,
            wall_time=time.perf_counter() - started,
            basis=Basis(basic=self.basic.copy(), status=self.status.copy()),
            infeasibility=self._total_infeasibility() if status == INFEASIBLE else 0.0,
        )

    def run(self) -> LpSolution:
        start = time.perf_counter()
        self.prepare()
        return self.result(self.optimize(), start)


class PersistentSimplex:
    """Repeated solves of one model under changing right-hand sides.

    Keeps basis, factorization, and scaling alive between calls, which makes
    the re-solves inside decomposition loops and enumeration sweeps cheap.
    """

    def __init__(self, model: LpModel, options: SolveOptions | None = None):
        self.model = model
        self.options = options or SolveOptions()
        self._core = _Simplex(model, self.options)
        self._core.prepare()

    def solve(self, rhs: np.ndarray | None = None) -> LpSolution:
        start = time.perf_counter()
        core = self._core
        if rhs is not None:
            core.set_rhs(rhs)
        else:
            core._recompute_xb()
        core.iterations = 0
        core.bland = False
        core.degenerate_streak = 0
        try:
            status = core.optimize()
        except SolverError:
            # Stale basis beyond repair: restart cold once.
            core._cold_basis()
            status = core.optimize()
        solution = core.result(status, start)
        if solution.status == OPTIMAL:
            solution.objective += self.model.objective_constant
        return solution


def solve_simplex(model: LpModel, options: SolveOptions | None = None) -> LpSolution:
    """Solve an :class:`LpModel` with the built-in revised simplex."""
    options = options or SolveOptions()
    if model.n_vars == 0 and model.n_rows == 0:
        return LpSolution(
            status=OPTIMAL,
            objective=model.objective_constant,
            x=np.zeros(0),
            duals=np.zeros(0),
            iterations=0,
        )
    solver = _Simplex(model, options)
    solution = solver.run()
    if solution.status == OPTIMAL:
        solution.objective += model.objective_constant
    elif solution.status == UNBOUNDED:
        solution.objective = -math.inf
    return solution
