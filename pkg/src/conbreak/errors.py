"""Error types shared across the package."""


class ConbreakError(Exception):
    """Base class for all package errors."""


class ParameterError(ConbreakError, ValueError):
    """A caller-supplied parameter is out of range or malformed."""


class CapacityError(ConbreakError):
    """An input exceeds a documented size guard."""


class FormatError(ConbreakError, ValueError):
    """A file or config payload does not match its documented format."""


class GameError(ConbreakError):
    """Base class for illegal play."""


class IllegalMoveError(GameError):
    """A move touches an edge it may not claim. Names the offending edge."""

    def __init__(self, message: str, edge=None):
        super().__init__(message)
        self.edge = edge


class ConnectivityError(IllegalMoveError):
    """A Connector edge does not touch her connected territory."""


class NoMoveError(ConbreakError):
    """A move was requested from a position with nothing left to claim."""
