"""Exception hierarchy shared by all bdlimits modules.

Two branches matter for callers (and for CLI exit codes): ValidationError
for rejected inputs, NumericError for computations that failed or refused
to proceed at runtime.
"""


class BdlimitsError(Exception):
    """Base class for all library errors."""


class ValidationError(BdlimitsError, ValueError):
    """Invalid input: bad graph, matrix pattern, configuration, or config file."""


class NumericError(BdlimitsError, ArithmeticError):
    """A numeric computation failed or would produce garbage."""


class InvalidEdgeError(ValidationError):
    """Edge is a self-loop, out of range, or duplicated."""


class DisconnectedGraphError(ValidationError):
    """Graph has no path between some pair of vertices."""


class PatternViolationError(ValidationError):
    """Matrix has a nonzero entry at a non-adjacent vertex pair."""

    def __init__(self, x: int, y: int, value: float):
        self.x = x
        self.y = y
        self.value = value
        super().__init__(
            f"nonzero entry {value!r} at non-adjacent pair ({x}, {y})"
        )


class StateSpaceTooLargeError(ValidationError):
    """Enumeration of all configurations would exceed the state cap."""


class AsymmetricMatrixError(ValidationError):
    """Operation requires a symmetric net interaction matrix."""


class DimensionMismatchError(ValidationError):
    """Vector/matrix dimensions do not agree."""


class NotSymmetricError(ValidationError):
    """Symmetric eigensolver got a matrix that is not symmetric."""


class SupportNotCoveredError(ValidationError):
    """Test function support sticks out of the scaled spin box."""


class ConfigError(ValidationError):
    """Config file is malformed; message names the offending field."""


class RateOverflowError(NumericError):
    """A jump-rate exponent left the safe range for exp()."""

    def __init__(self, vertex: int, exponent: float):
        self.vertex = vertex
        self.exponent = exponent
        super().__init__(
            f"rate exponent {exponent!r} at vertex {vertex} exceeds safe magnitude 700"
        )


class ExponentOverflowError(NumericError):
    """A vector-field exponent left the safe range for exp()."""

    def __init__(self, vertex: int, exponent: float, time: float | None = None):
        self.vertex = vertex
        self.exponent = exponent
        self.time = time
        at = "" if time is None else f" at t={time!r}"
        super().__init__(
            f"field exponent {exponent!r} at vertex {vertex}{at} exceeds safe magnitude 700"
        )


class SingularSystemError(NumericError):
    """Balance equations were singular; the chain should be irreducible."""


class QuadratureNotConvergedError(NumericError):
    """Step-halving quadrature did not stabilize within the depth limit."""


class NotHurwitzError(NumericError):
    """Drift matrix has a nonnegative real eigenvalue; no stationary law."""


class InconclusiveSpectrumError(NumericError):
    """Neither spectral certificate resolves the eigenvalue sign at tolerance."""


class BudgetExceededError(NumericError):
    """Projected or actual event count exceeds the experiment budget."""
