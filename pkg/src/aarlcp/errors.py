"""Exception types shared across the package."""


class AarlcpError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(AarlcpError, ValueError):
    """Operands or instance fields have inconsistent shapes."""


class EmptyUncertaintySet(AarlcpError):
    """The uncertainty polyhedron contains no points."""


class NotCompact(AarlcpError):
    """The uncertainty polyhedron is unbounded in some direction."""


class RelintViolation(AarlcpError):
    """An implicit equality row has a nonzero right-hand side, so the origin
    cannot lie in the relative interior of the uncertainty set."""


class NumericalFailure(AarlcpError):
    """A numerical routine exhausted its safeguards."""


class NodeLimitExceeded(AarlcpError):
    """The tree search hit its node budget without reaching a conclusion."""


class OracleLimitExceeded(AarlcpError):
    """Problem too large for exhaustive support enumeration."""


class NotPsd(AarlcpError):
    """Matrix fails the positive semidefiniteness requirement."""
