"""Solver result types and options."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"
# Internal status used by enumeration sweeps: the solve was abandoned once a
# valid lower bound proved it cannot beat the sweep's incumbent.
CUTOFF = "cutoff"


@dataclass
class Basis:
    """Warm-start state: basic column indices plus nonbasic statuses.

    Column indices cover structural variables followed by one slack per row;
    statuses use the simplex's internal coding. Only meaningful for a model
    with identical dimensions.
    """

    basic: np.ndarray
    status: np.ndarray


@dataclass
class SolveOptions:
    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-7
    iteration_limit: Optional[int] = None
    # "auto" picks the decomposed strategy for large block-structured
    # models and the plain revised simplex otherwise.
    method: str = "auto"
    warm_basis: Optional[Basis] = None
    compute_duals: bool = True
    # Decomposition controls.
    benders_max_iterations: int = 400
    benders_gap: float = 1e-8
    # Abort early once the lower bound proves the optimum cannot beat this
    # value (used by enumeration sweeps); None disables.
    cutoff: Optional[float] = None


@dataclass
class LpSolution:
    """Result of one solve.

    ``objective`` includes the model's objective constant. ``duals`` are
    shadow prices per row (d objective / d rhs) when available; the
    decomposed strategy does not produce them.
    """

    status: str
    objective: float = float("nan")
    x: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    iterations: int = 0
    wall_time: float = 0.0
    basis: Optional[Basis] = None
    # Valid lower bound on the optimum (set when a cutoff abort happens).
    lower_bound: Optional[float] = None
    # Residual bound-violation total on infeasible exit (solver scale).
    infeasibility: float = 0.0

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL
