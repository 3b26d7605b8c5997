"""Exception hierarchy shared by every alclearn module."""

from __future__ import annotations


class AlcLearnError(RuntimeError):
    """Base class for errors surfaced to the command line."""

    exit_code: int = 1


class ConfigurationError(AlcLearnError):
    """Raised when a configuration value violates its invariants."""

    exit_code = 3


class InputFileError(AlcLearnError):
    """Raised when an input file cannot be read."""

    exit_code = 2


class KBFormatError(AlcLearnError):
    """Raised when a knowledge base document is malformed."""

    exit_code = 3

    def __init__(self, message: str, *, line: int | None = None, source: str | None = None) -> None:
        self.line = line
        self.source = source
        location = ""
        if source is not None:
            location = f"{source}:"
        if line is not None:
            location = f"{location}{line}: "
        elif location:
            location = f"{location} "
        super().__init__(f"{location}{message}")


class ConceptSyntaxError(AlcLearnError):
    """Raised when concept text does not follow the grammar."""

    exit_code = 3

    def __init__(self, message: str, *, position: int) -> None:
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnknownTokenError(ConceptSyntaxError):
    """Raised when concept text contains a character outside the grammar."""


class UnknownNameError(AlcLearnError):
    """Raised when a concept, role or individual is not part of the knowledge base."""

    exit_code = 4

    def __init__(self, name: str, kind: str = "name") -> None:
        self.name = name
        self.kind = kind
        super().__init__(f"unknown {kind}: {name!r}")


class InvalidProblemError(AlcLearnError):
    """Raised when a learning problem violates its invariants."""

    exit_code = 4


class EmbeddingError(AlcLearnError):
    """Raised when an embedding file cannot be used."""

    exit_code = 3


class MissingIndividualError(EmbeddingError):
    """Raised when an individual of the knowledge base has no embedding."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"no embedding for individual {name!r}")


class DimensionMismatchError(EmbeddingError):
    """Raised when embedding rows disagree on their width."""

    def __init__(self, line: int, expected: int, found: int) -> None:
        self.line = line
        super().__init__(f"line {line}: expected {expected} values, found {found}")


class ShapeMismatchError(AlcLearnError):
    """Raised when tensors handed to the Q-network have inconsistent shapes."""

    exit_code = 3


class CheckpointError(AlcLearnError):
    """Raised when a model checkpoint is malformed."""

    exit_code = 3


class EmptyFrontierError(AlcLearnError):
    """Raised when the search frontier holds no node."""


class EmptyRefinementError(AlcLearnError):
    """Raised when a state has no admissible refinement."""


class NoConceptsFoundError(AlcLearnError):
    """Raised when learning-problem generation keeps no concept."""

    exit_code = 5


class SubclassCycleWarning(UserWarning):
    """Issued when subclass axioms contain a cycle."""
