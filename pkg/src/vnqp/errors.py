"""Exception types shared across the package."""


class VnqpError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(VnqpError, ValueError):
    """Operands have incompatible shapes."""


class DegenerateColumn(VnqpError):
    """Column is numerically affinely dependent on the stored set."""


class IndexOutOfRange(VnqpError, IndexError):
    """Column index outside the stored range."""


class SingularTriangle(VnqpError):
    """Triangular factor has a diagonal entry below threshold."""


class ZeroDirection(VnqpError, ValueError):
    """Direction vector has numerically zero norm."""


class TooFewPoints(VnqpError, ValueError):
    """Operation needs at least two points."""


class InvalidSequence(VnqpError, ValueError):
    """Endpoint sequences violate the one-side-per-step contract."""


class InverseOutOfRange(VnqpError):
    """Subdifferential-inverse query left the current interval."""


class ConfigError(VnqpError, ValueError):
    """Inconsistent solver configuration."""
