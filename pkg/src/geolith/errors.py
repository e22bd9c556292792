"""Exception hierarchy shared across the package."""


class GeolithError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(GeolithError):
    """A configuration document violates the published schema.

    Carries the offending field name and file location so callers can point
    the user at the exact problem.
    """

    def __init__(self, message, field=None, location=None):
        self.field = field
        self.location = location
        parts = [message]
        if field is not None:
            parts.append(f"field: {field}")
        if location is not None:
            parts.append(f"location: {location}")
        super().__init__(" | ".join(parts))


class InvariantViolation(GeolithError):
    """A domain type invariant does not hold.

    ``invariant`` names the violated condition, e.g. ``"flow_rate >= 0"``.
    """

    def __init__(self, invariant, message=None):
        self.invariant = invariant
        super().__init__(message or f"invariant violated: {invariant}")


class InfeasibleModelError(GeolithError):
    """The optimization problem has no feasible point.

    Raised before solving when infeasibility is detectable by construction
    (positive demand with zero available supply), or after solving when the
    solver reports an infeasible status.
    """


class SolverError(GeolithError):
    """Numerical breakdown or an unusable status from the LP solver."""

    def __init__(self, message, iterations=None):
        self.iterations = iterations
        if iterations is not None:
            message = f"{message} (after {iterations} iterations)"
        super().__init__(message)


class PipelineError(GeolithError):
    """Failure inside an end-to-end run; names the pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"pipeline stage '{stage}' failed: {cause}")
