"""Exception types shared across the package.

The CLI maps ConfigError to exit code 2 and everything else to a
nonzero failure exit, so keep the hierarchy shallow.
"""


class SteklovError(Exception):
    """Base class for all package errors."""


class DomainError(SteklovError, ValueError):
    """An argument is outside the operation's admissible domain."""


class HypothesisViolationError(DomainError):
    """Parameters violate a structural hypothesis (e.g. epsilon >= length/6)."""


class CompletenessError(SteklovError):
    """A spectrum stream was exhausted before completeness could be certified."""


class MeshResolutionError(SteklovError):
    """The mesh is too coarse to resolve a coefficient transition interval."""


class NumericError(SteklovError):
    """A numerical routine failed to converge or produced an invalid result."""


class InfeasibleError(SteklovError):
    """The requested target is outside the reachable range (e.g. volume below the floor)."""


class UnsupportedModeError(SteklovError):
    """Operation invoked on a metric mode it does not support."""


class ConfigError(SteklovError):
    """Invalid or malformed experiment configuration."""
