"""Exception types shared across the toolkit.

Every exception raised on bad input derives from KitError so the CLI can
map them to a structured error payload and exit code 1.
"""


class KitError(Exception):
    """Base class for domain errors raised by the toolkit."""


class MalformedTableError(KitError):
    """A multiplication table is not a valid semigroup table."""


class UnsupportedOrderError(KitError):
    """Exhaustive enumeration requested beyond the supported order."""


class RegexSyntaxError(KitError):
    """Regular-expression parse failure; carries the offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class WordDomainError(KitError):
    """A word is outside the domain of an operation (empty, foreign letter)."""


class FoldingError(KitError):
    """An operation required a folded (deterministic) subgroup graph."""


class NotASubshiftError(KitError):
    """A language has an empty factorial-prolongable core."""


class NonPrimitiveError(KitError):
    """A substitution operation required primitivity."""
