"""Exception types raised across the package."""


class MvapcpError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(MvapcpError, ValueError):
    """A market or configuration parameter violates its invariants."""


class DataError(MvapcpError, ValueError):
    """Price data is malformed (non-positive values, bad rows, too short)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class WindowError(MvapcpError, ValueError):
    """Not enough history for an estimation or mirror window."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InsufficientSampleError(MvapcpError, ValueError):
    """A metric needs more observations than were supplied."""


class UndefinedRatioError(MvapcpError, ValueError):
    """A ratio metric has a zero denominator."""
