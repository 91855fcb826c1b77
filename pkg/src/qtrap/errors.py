"""Exception types shared across the package."""


class QtrapError(Exception):
    """Base class for all package-specific failures."""


class ConvergenceError(QtrapError):
    """A numerical routine failed to converge to the requested tolerance."""


class StepSizeError(QtrapError):
    """Time integration rejected a step (amplitude left the unit disc)."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SteadyStateError(QtrapError):
    """The trailing window of a trajectory has not settled."""


class NoMaximumError(QtrapError):
    """A maximization bracket contains no bound-state region."""
