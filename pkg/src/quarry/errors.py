"""Shared exception types.

Every error the service surfaces maps to one of these. The REST layer
translates them to ApiError payloads; library users catch them directly.
"""

from __future__ import annotations


class QuarryError(Exception):
    """Base class for all workbench errors."""


class InvalidDocument(QuarryError):
    pass


class StorageFailure(QuarryError):
    pass


class NotFound(QuarryError):
    pass


class InvalidRecord(QuarryError):
    pass


class QuerySyntaxError(QuarryError):
    """Raised by the query parser.

    ``offset`` is the byte offset into the UTF-8 encoding of the query
    where parsing failed; ``expected`` names the token kinds that would
    have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: list[str]):
        super().__init__(f"{message} at offset {offset} (expected: {', '.join(expected)})")
        self.offset = offset
        self.expected = expected


class CycleIntroduced(QuarryError):
    pass


class CycleDetected(QuarryError):
    pass


class MissingDependency(QuarryError):
    pass


class LeaseExpired(QuarryError):
    pass


class UnknownTask(QuarryError):
    pass


class GazetteerMissing(QuarryError):
    pass


class LexiconMissing(QuarryError):
    pass


class KbMissing(QuarryError):
    pass


class MissingAuthor(QuarryError):
    pass


class EmptyGraph(QuarryError):
    pass
