"""Exception types raised across the package."""


class NewtonResError(Exception):
    """Base class for all package errors."""


class DomainError(NewtonResError, ValueError):
    """An argument lies outside the domain of the operation."""


class AccuracyError(NewtonResError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None, requested=None):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested


class DegenerateMediumError(NewtonResError, ValueError):
    """The medium is at rest, so pressure does not depend on slope."""


class InconsistentPressureError(NewtonResError, ArithmeticError):
    """Computed pressure functions violate an ordering they must satisfy."""


class InvalidProfileError(NewtonResError, ValueError):
    """A knot list does not describe an admissible convex profile."""
