"""Sparse linear program container.

Holds a variable registry (bounds, objective coefficients), constraint
triplets with row senses and right-hand sides, and metadata tracing every
variable and row back to (technology, commodity, period, segment). The
metadata also exposes the block structure (periods coupled only through
capacity variables) that the decomposed solve strategy exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from geolith.errors import GeolithError

SENSE_LE = "<="
SENSE_EQ = "="
SENSE_GE = ">="
_SENSES = (SENSE_LE, SENSE_EQ, SENSE_GE)


@dataclass(frozen=True)
class VariableMeta:
    """Traceability tag for one variable."""

    tech: Optional[str] = None
    commodity: Optional[str] = None
    period: Optional[int] = None
    segment: Optional[int] = None
    kind: str = "generic"


@dataclass(frozen=True)
class RowMeta:
    """Traceability tag for one constraint row."""

    tech: Optional[str] = None
    commodity: Optional[str] = None
    period: Optional[int] = None
    segment: Optional[int] = None
    kind: str = "generic"


class LpModel:
    """A minimization LP in build order.

    Variables and rows are appended through :meth:`add_variable`,
    :meth:`add_row`, and :meth:`add_coeff`; the class validates references
    eagerly so a malformed model fails at construction, not at solve time.
    """

    def __init__(self, name: str = "lp"):
        self.name = name
        self.var_names: list[str] = []
        self.var_lb: list[float] = []
        self.var_ub: list[float] = []
        self.var_obj: list[float] = []
        self.var_meta: list[VariableMeta] = []
        self.row_names: list[str] = []
        self.row_sense: list[str] = []
        self.row_rhs: list[float] = []
        self.row_meta: list[RowMeta] = []
        self.entries_row: list[int] = []
        self.entries_col: list[int] = []
        self.entries_val: list[float] = []
        # Constant cost terms that do not multiply any variable (e.g. the
        # extraction-plant annuity once geothermal wells are drilled).
        self.objective_constant: float = 0.0

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_rows(self) -> int:
        return len(self.row_names)

    def add_variable(
        self,
        name: str,
        lb: float = 0.0,
        ub: float = math.inf,
        obj: float = 0.0,
        meta: VariableMeta | None = None,
    ) -> int:
        if not (lb <= ub):
            raise GeolithError(f"variable '{name}': lower bound {lb} > upper bound {ub}")
        self.var_names.append(name)
        self.var_lb.append(float(lb))
        self.var_ub.append(float(ub))
        self.var_obj.append(float(obj))
        self.var_meta.append(meta or VariableMeta())
        return self.n_vars - 1

    def add_row(
        self,
        sense: str,
        rhs: float,
        name: str | None = None,
        meta: RowMeta | None = None,
    ) -> int:
        if sense not in _SENSES:
            raise GeolithError(f"unknown row sense '{sense}'")
        self.row_names.append(name or f"r{self.n_rows}")
        self.row_sense.append(sense)
        self.row_rhs.append(float(rhs))
        self.row_meta.append(meta or RowMeta())
        return self.n_rows - 1

    def add_coeff(self, row: int, col: int, value: float) -> None:
        if not (0 <= row < self.n_rows):
            raise GeolithError(f"coefficient references unknown row {row}")
        if not (0 <= col < self.n_vars):
            raise GeolithError(f"coefficient references unknown variable {col}")
        if value != 0.0:
            self.entries_row.append(row)
            self.entries_col.append(col)
            self.entries_val.append(float(value))

    def matrix(self) -> sp.csc_matrix:
        """Constraint matrix as CSC (duplicate entries are summed)."""
        coo = sp.coo_matrix(
            (self.entries_val, (self.entries_row, self.entries_col)),
            shape=(self.n_rows, self.n_vars),
        )
        return coo.tocsc()

    def arrays(self):
        """(lb, ub, obj, senses, rhs) as numpy arrays."""
        return (
            np.asarray(self.var_lb, dtype=float),
            np.asarray(self.var_ub, dtype=float),
            np.asarray(self.var_obj, dtype=float),
            np.asarray(self.row_sense, dtype=object),
            np.asarray(self.row_rhs, dtype=float),
        )

    def variable_index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise GeolithError(f"no variable named '{name}'") from None

    def block_structure(self):
        """Partition into linking variables and per-period blocks.

        Returns ``(linking_vars, period_vars, period_rows, linking_rows)``
        where ``period_vars``/``period_rows`` map period id -> index list.
        Returns ``None`` when any row couples two different periods, i.e.
        the model is not block-angular over periods.
        """
        linking_vars = [
            j for j, meta in enumerate(self.var_meta) if meta.period is None
        ]
        period_vars: dict[int, list[int]] = {}
        for j, meta in enumerate(self.var_meta):
            if meta.period is not None:
                period_vars.setdefault(meta.period, []).append(j)

        var_period = [meta.period for meta in self.var_meta]
        row_period: list[Optional[int]] = [None] * self.n_rows
        seen = [False] * self.n_rows
        for row, col in zip(self.entries_row, self.entries_col):
            p = var_period[col]
            if p is None:
                continue
            if seen[row] and row_period[row] is not None and row_period[row] != p:
                return None
            row_period[row] = p
            seen[row] = True

        period_rows: dict[int, list[int]] = {p: [] for p in period_vars}
        linking_rows: list[int] = []
        for i in range(self.n_rows):
            if row_period[i] is None:
                linking_rows.append(i)
            else:
                period_rows.setdefault(row_period[i], []).append(i)
        return linking_vars, period_vars, period_rows, linking_rows

    def validate(self) -> None:
        """Re-check structural invariants (cheap; used by tests)."""
        if len(self.var_meta) != self.n_vars:
            raise GeolithError("metadata must cover every variable")
        for lb, ub, name in zip(self.var_lb, self.var_ub, self.var_names):
            if not lb <= ub:
                raise GeolithError(f"variable '{name}' has crossed bounds")
        for row, col in zip(self.entries_row, self.entries_col):
            if not (0 <= row < self.n_rows and 0 <= col < self.n_vars):
                raise GeolithError("dangling coefficient")
