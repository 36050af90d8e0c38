"""Shared exception types."""


class Fo2Error(Exception):
    """Base class for errors raised by this package."""


class ParseError(Fo2Error):
    """Formula text could not be parsed; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
        self.bare_message = message


class FormatError(Fo2Error):
    """A vocabulary, structure, graph, or formula file violates its format."""


class ProjectionMismatchError(Fo2Error):
    """An edge color's projections disagree with its endpoint vertex colors."""


class ResourceLimitError(Fo2Error):
    """Enumeration would exceed the configured candidate ceiling."""
