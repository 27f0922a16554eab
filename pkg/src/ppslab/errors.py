"""Exception hierarchy for ppslab.

Every error raised on purpose by the library derives from PpsLabError,
which is a ValueError so callers that only care about bad input can
catch the builtin.
"""


class PpsLabError(ValueError):
    """Base class for all ppslab errors."""

    pass


class DimensionMismatchError(PpsLabError):
    """Raised when kets/operators of incompatible dimensions are combined."""

    pass


class NotNormalizedError(PpsLabError):
    """Raised when a normalized ket is required but a sub-normalized one is given."""

    pass


class NotAProjectorError(PpsLabError):
    """Raised when an operator fails Π² = Π or Π† = Π."""

    pass


class SingularStrengthError(PpsLabError):
    """Raised when a strength is outside [0, 1] or too small to divide by."""

    pass


class UndefinedWeakValueError(PpsLabError):
    """Raised when pre- and postselection are orthogonal."""

    pass


class DegenerateScenarioError(PpsLabError):
    """Raised when a conditional quantity has a vanishing denominator."""

    pass


class DegenerateRunError(PpsLabError):
    """Raised when a simulated circuit annihilates the state.

    Attributes:
        stage: Name of the pipeline stage after which nothing survived
    """

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class InvalidDistributionError(PpsLabError):
    """Raised when a pigeon distribution is not a probability vector."""

    pass


class SweepConfigError(PpsLabError):
    """Raised when a sweep or check configuration is invalid."""

    pass


class ClassicalBoundError(PpsLabError):
    """Raised when the classical minimum disagrees with its closed form."""

    pass
