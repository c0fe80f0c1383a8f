"""Exception types shared across the package."""


class SpinfidError(Exception):
    """Base class for all package-specific errors."""


class PoleError(SpinfidError, ValueError):
    """Requested value sits on a genuine pole (e.g. K(1), xi on the critical set)."""


class DomainError(SpinfidError, ValueError):
    """Argument outside the supported domain of an operation."""


class DegenerateModeError(SpinfidError, ValueError):
    """Both states close their gap at the same momentum; the mode overlap is undefined."""


class NumericsError(SpinfidError, RuntimeError):
    """An iterative numerical procedure failed to reach its accuracy target."""


class ConfigError(SpinfidError, ValueError):
    """Invalid run configuration passed to the command-line driver."""
