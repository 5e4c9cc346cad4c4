"""Exception types raised by the library."""


class ER3BPError(Exception):
    """Base class for computation errors (CLI exit code 3)."""


class CollisionError(ER3BPError):
    """The third body is (numerically) on top of one of the primaries."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class DegenerateSystem(ER3BPError):
    """The 2x2 first-order system for the distance offsets is singular."""


class NoConvergence(ER3BPError):
    pass


class SingularJacobian(ER3BPError):
    pass


class BracketInvalid(ER3BPError):
    """Stability does not change sign between the ends of the mass-ratio bracket."""


class NotStable(ER3BPError):
    pass


class SingularConditions(ER3BPError):
    """The initial-condition matrix of the modal expansion is ill conditioned."""


class StepUnderflow(ER3BPError):
    pass
