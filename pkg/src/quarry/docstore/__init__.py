"""Document store: persistence, inverted index, and the field-query language."""

from .query import (
    And,
    MatchAll,
    Not,
    Or,
    Phrase,
    QueryAst,
    Range,
    Term,
    parse_query,
    print_query,
)
from .store import DocStore, extract_projected
from .types import AnalysisRecord, Document, validate_document, validate_record, version_sort_key

__all__ = [
    "AnalysisRecord",
    "And",
    "DocStore",
    "Document",
    "MatchAll",
    "Not",
    "Or",
    "Phrase",
    "QueryAst",
    "Range",
    "Term",
    "extract_projected",
    "parse_query",
    "print_query",
    "validate_document",
    "validate_record",
    "version_sort_key",
]
