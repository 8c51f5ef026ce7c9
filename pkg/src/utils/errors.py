"""
Exception hierarchy shared by every module of the engine.
"""
from typing import Dict, Optional


class AnalogyError(Exception):
    """Base class for all engine errors."""


class InputError(AnalogyError, ValueError):
    """An operation was called outside its pre-conditions."""


class ParseError(InputError):
    """Malformed text input (truth tables, relation matrices, registries, CSV)."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class CapabilityError(AnalogyError):
    """The request exceeds a configured enumeration cap."""


class TieError(AnalogyError):
    """A majority vote ended in a tie; `votes` holds the tally per label."""

    def __init__(self, message: str, votes: Optional[Dict[str, int]] = None, applicable_triples: int = 0):
        self.votes = dict(votes or {})
        self.applicable_triples = applicable_triples
        super().__init__(message)


class ConfigError(AnalogyError, ValueError):
    """An environment setting is missing or invalid."""
