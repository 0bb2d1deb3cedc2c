"""Exception types raised across the package."""


class GraevError(Exception):
    """Base class for all package errors."""


class LengthMismatch(GraevError, ValueError):
    pass


class UndefinedDistance(GraevError, ValueError):
    pass


class PositionOutOfRange(GraevError, IndexError):
    pass


class NotXPosition(GraevError, ValueError):
    pass


class NotInG(GraevError, ValueError):
    pass


class BudgetExceeded(GraevError, RuntimeError):
    pass


class CapTooSmall(GraevError, ValueError):
    pass


class IdentityInput(GraevError, ValueError):
    pass


class InconclusiveCertificate(GraevError, RuntimeError):
    """A distance needed for a decision was only certified under a length cap."""


class ClosednessViolated(GraevError, ValueError):
    pass


class InvalidKatetov(GraevError, ValueError):
    pass


class ParseError(GraevError, ValueError):
    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class VersionMismatch(GraevError, ValueError):
    pass
