"""Exception hierarchy shared by all modules."""


class BarnesBetaError(Exception):
    """Base class for library errors."""


class DomainError(BarnesBetaError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """The argument hits a pole."""


class CapacityError(BarnesBetaError, ValueError):
    """A request exceeds a hard size limit (e.g. subset enumeration)."""


class AccuracyError(BarnesBetaError, RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``best`` carries the last estimate and ``error`` its error estimate, so
    callers can decide whether the value is still usable.
    """

    def __init__(self, message, best=None, error=None):
        super().__init__(message)
        self.best = best
        self.error = error


class TruncationError(AccuracyError):
    """An infinite product or series did not settle under doubling."""
