"""Corpus domain types: documents and memoized analysis outputs."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional

from ..errors import InvalidDocument, InvalidRecord

SOURCES = ("imported", "social", "web")

FIELD_NAME_RE = re.compile(r"[a-z0-9_.]+\Z")

#: Scalar field values: strings (timestamps travel as ISO-8601 strings),
#: numbers, and booleans.
Scalar = Any


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass
class Document:
    """One corpus item.

    ``fields`` is a flat map of typed scalars; dotted names denote nesting
    (``sentiment.score``) but are stored flat under the dotted name.
    """

    id: str
    text: str = ""
    source: str = "imported"
    fields: dict[str, Scalar] = field(default_factory=dict)
    created_at: Optional[datetime] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "text": self.text,
            "fields": dict(self.fields),
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


def validate_document(doc: Document) -> None:
    """Raise InvalidDocument unless ``doc`` satisfies the corpus invariants."""
    if not isinstance(doc.id, str) or not doc.id:
        raise InvalidDocument("document id must be a non-empty string")
    if doc.source not in SOURCES:
        raise InvalidDocument(f"unknown source {doc.source!r}; expected one of {SOURCES}")
    if not isinstance(doc.text, str):
        raise InvalidDocument("document text must be a string")
    try:
        doc.text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InvalidDocument(f"document text is not valid unicode: {exc}") from exc
    if not isinstance(doc.fields, dict):
        raise InvalidDocument("fields must be a map")
    for name, value in doc.fields.items():
        if not isinstance(name, str) or not FIELD_NAME_RE.fullmatch(name):
            raise InvalidDocument(f"bad field name {name!r}: must match [a-z0-9_.]+")
        if not isinstance(value, (str, bool, int, float)):
            raise InvalidDocument(f"field {name!r} has non-scalar value of type {type(value).__name__}")


@dataclass
class AnalysisRecord:
    """Memoized output of one tool version on one document.

    (doc_id, tool_id, tool_version) is the cache key; a later write for the
    same key replaces the earlier one.
    """

    doc_id: str
    tool_id: str
    tool_version: str
    status: str  # "ok" | "error"
    output: Any = None
    error_message: Optional[str] = None
    produced_at: Optional[datetime] = None

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "tool_id": self.tool_id,
            "tool_version": self.tool_version,
            "status": self.status,
            "output": self.output,
            "error_message": self.error_message,
            "produced_at": self.produced_at.isoformat() if self.produced_at else None,
        }


def validate_record(rec: AnalysisRecord) -> None:
    if not rec.doc_id or not rec.tool_id or not rec.tool_version:
        raise InvalidRecord("doc_id, tool_id and tool_version must all be non-empty")
    if rec.status == "ok":
        if rec.output is None:
            raise InvalidRecord("status=ok requires an output")
    elif rec.status == "error":
        if not rec.error_message:
            raise InvalidRecord("status=error requires an error_message")
    else:
        raise InvalidRecord(f"unknown status {rec.status!r}")


def version_sort_key(version: str):
    """Ordering key for tool version strings.

    Dotted numeric segments compare numerically ("1.10" > "1.9"), anything
    else falls back to lexicographic ordering within its segment.
    """
    parts = []
    for seg in version.split("."):
        if seg.isdigit():
            parts.append((0, int(seg), ""))
        else:
            parts.append((1, 0, seg))
    return tuple(parts)
