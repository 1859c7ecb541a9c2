"""Exception types raised across the package."""

from __future__ import annotations


class HyperboundError(ValueError):
    """Base class for data errors (bad input, infeasible requests).

    ``line`` is the 1-based input line when the error came from a parser.
    """

    def __init__(self, message: str = "", line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdgeId(HyperboundError):
    pass


class EmptyOwnerList(HyperboundError):
    pass


class UnknownVertex(HyperboundError, KeyError):
    pass


class UnknownEdge(HyperboundError, KeyError):
    pass


class MissingWeight(HyperboundError):
    pass


class TooLarge(HyperboundError):
    pass


class InfeasibleInput(HyperboundError):
    pass


class InstanceMismatch(HyperboundError):
    pass


class Unsatisfiable(HyperboundError):
    pass


class CapacityViolation(AssertionError):
    """Raised when the engine would exceed a user's capacity. Indicates a bug."""


class ParseError(HyperboundError):
    """A parse failure tied to a 1-based line number."""


class MalformedLine(ParseError):
    pass


class IntegerOverflow(ParseError):
    pass
