"""Exception types raised across the package."""


class GdickeError(Exception):
    """Base class for all domain errors."""


class NonConvergence(GdickeError):
    """An iterative solver failed to reach its tolerance within the iteration budget."""


class InvalidExpansionPoint(GdickeError):
    """Fluctuation expansion requested around a configuration that is not stationary."""


class UnstableMode(GdickeError):
    """The quadratic form has a genuinely negative mode; the expansion point is not a minimum."""


class UncertaintyViolation(GdickeError):
    """A quadrature pair violates the Heisenberg bound beyond numerical tolerance."""


class DimensionCap(GdickeError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class NoBoundaryInBracket(GdickeError):
    """The search bracket does not contain exactly one phase boundary."""


class InsufficientPoints(GdickeError):
    """Too few data points inside the fit window."""


class NonPositiveValue(GdickeError):
    """Log-log fitting requires strictly positive distances and values."""
