"""Exception hierarchy shared by every eokit module."""

from __future__ import annotations


class EOError(Exception):
    """Base class for all eokit errors."""


class UnknownPrefix(EOError, KeyError):
    def __init__(self, label: str) -> None:
        super().__init__(label)
        self.label = label

    def __str__(self) -> str:
        return f"unknown prefix {self.label!r}"


class SealedGraphError(EOError, RuntimeError):
    """Raised when a sealed graph is mutated."""


class ParseError(EOError, ValueError):
    """A syntax error in Turtle, Manchester or query text.

    ``line`` and ``column`` are 1-based; ``expected`` names what the parser
    wanted at that point.
    """

    def __init__(self, message: str, line: int, column: int, expected: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}"
        if self.expected:
            return f"{where}: {self.message} (expected {self.expected})"
        return f"{where}: {self.message}"


class UnknownClass(EOError, KeyError):
    def __init__(self, iri: object) -> None:
        super().__init__(iri)
        self.iri = iri

    def __str__(self) -> str:
        return f"undeclared class {self.iri}"


class UnknownExplanationType(EOError, KeyError):
    def __init__(self, name: object) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"not one of the nine explanation types: {self.name}"


class OntologyError(EOError, ValueError):
    """Structural problem in an ontology (cycles, undeclared names)."""


class ProfileError(EOError, ValueError):
    """A capability profile or question descriptor is malformed."""


def position_of(text: str, offset: int) -> tuple[int, int]:
    """Convert a character offset into a 1-based (line, column) pair."""
    line = text.count("\n", 0, offset) + 1
    last_nl = text.rfind("\n", 0, offset)
    return line, offset - last_nl
