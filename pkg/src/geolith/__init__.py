"""Cost-optimal municipal energy systems with hybrid deep-geothermal plants
and direct lithium extraction.

The package is organized around the optimization pipeline:

* :mod:`geolith.core` -- domain types, configuration loading, scenario
  presets, and synthetic data generators.
* :mod:`geolith.geothermal` -- subsurface temperatures, drilling costs, and
  the ORC / district-heating plant equations.
* :mod:`geolith.dle` -- lithium mass balance, carbonate economics, and
  downstream impact metrics.
* :mod:`geolith.tsagg` -- typical-period time series aggregation.
* :mod:`geolith.esom` -- the capacity-expansion + dispatch linear program.
* :mod:`geolith.lpsolve` -- the built-in LP solver and backend contract.
* :mod:`geolith.runner` -- scenario runs, sensitivity sweeps, fleet studies,
  and result export (also the CLI backend).
"""

__version__ = "0.1.0"

from geolith.errors import (
    ConfigError,
    GeolithError,
    InfeasibleModelError,
    InvariantViolation,
    PipelineError,
    SolverError,
)

__all__ = [
    "__version__",
    "GeolithError",
    "ConfigError",
    "InvariantViolation",
    "InfeasibleModelError",
    "SolverError",
    "PipelineError",
]
