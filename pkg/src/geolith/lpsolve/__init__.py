"""LP solving under a stable, backend-agnostic contract.

:func:`solve` is the single entry point. The built-in backend couples a
bounded-variable revised simplex (direct solves, warm starts, duals) with a
decomposed strategy for large block-structured models. External solvers can
be plugged in through :func:`register_backend` without touching the model
builder; the shipped tests all run on the built-in backend.
"""

from __future__ import annotations

from typing import Callable, Optional

from geolith.errors import GeolithError
from geolith.esom.model import LpModel
from geolith.lpsolve.benders import BendersCarry, solve_benders
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

# Above this row count, block-structured models go through the decomposed
# strategy; direct dense solves stay snappy below it.
_DECOMPOSE_ROWS = 700

Backend = Callable[[LpModel, SolveOptions], LpSolution]

_BACKENDS: dict[str, Backend] = {}


def register_backend(name: str, backend: Backend) -> None:
    """Register an external solver under ``name`` for use via options.method."""
    _BACKENDS[name] = backend


def solve(
    model: LpModel,
    options: Optional[SolveOptions] = None,
    carry: Optional[BendersCarry] = None,
) -> LpSolution:
    """Solve an :class:`LpModel`.

    ``options.method`` selects the strategy: ``"simplex"``, ``"decomposed"``,
    a registered backend name, or ``"auto"`` (decomposed for large
    block-structured models, simplex otherwise). Deterministic for identical
    inputs.
    """
    options = options or SolveOptions()
    method = options.method
    if method in _BACKENDS:
        return _BACKENDS[method](model, options)
    if method == "simplex":
        return solve_simplex(model, options)
    if method == "decomposed":
        return solve_benders(model, options, carry=carry)
    if method != "auto":
        raise GeolithError(f"unknown solve method '{method}'")
    if model.n_rows > _DECOMPOSE_ROWS:
        return solve_benders(model, options, carry=carry)
    return solve_simplex(model, options)


__all__ = [
    "LpSolution",
    "SolveOptions",
    "Basis",
    "BendersCarry",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "ITERATION_LIMIT",
    "CUTOFF",
    "solve",
    "solve_simplex",
    "solve_benders",
    "PersistentSimplex",
    "register_backend",
]
