"""Exception hierarchy shared by all modules.

Every error carries a ``kind`` used by the service and CLI to map failures
onto exit codes: usage errors exit 1, data errors exit 2, internal
inconsistencies exit 3.
"""


class PolygenError(Exception):
    kind = "data"


class UsageError(PolygenError):
    """Bad arguments or configuration."""

    kind = "usage"


class DataError(PolygenError):
    """Malformed or unusable input data."""

    kind = "data"


class InconsistencyError(PolygenError):
    """Internal invariant violated; indicates a bug, not bad input."""

    kind = "inconsistency"


class NonSquareMatrixError(DataError):
    pass


class SingularMatrixError(DataError):
    pass


class ZeroVectorError(DataError):
    pass


class DimensionError(DataError):
    """Ambient dimension outside the supported range (1..16)."""


class EmptyPolyhedronError(DataError):
    pass


class UnboundedPolyhedronError(DataError):
    pass


class CapExceededError(PolygenError):
    """Lattice-point enumeration grew past the configured cap.

    Not a failure: callers such as the normality check convert it into a
    distinct "unverified" outcome.
    """

    kind = "data"


class ConversionError(DataError):
    """Representation conversion impossible (non-lattice vertices, unbounded...)."""
