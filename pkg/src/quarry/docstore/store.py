"""Durable document + analysis store with an in-memory inverted index.

Documents and analysis records persist in SQLite; the positional text
index and per-field value indexes live in memory and are rebuilt when a
store is reopened. All mutations happen under one lock, so a search never
observes a half-indexed document.

Projected analysis fields: a tool registers projection paths (e.g.
``sentiment.score``); scalar leaves of its latest record's output under
each path become searchable document fields. A path is resolved against
the record output by walking its dot-separated segments (descending into
list elements), after first stripping a leading segment equal to the tool
id, so ``sentiment.score`` reads ``output["score"]`` of the ``sentiment``
tool while ``entities.kb_id`` reads ``output["entities"][*]["kb_id"]`` of
the linking tool.
"""

from __future__ import annotations

import json
import math
import sqlite3
import threading
from datetime import datetime
from typing import Iterable, Optional

from ..errors import InvalidDocument, NotFound, StorageFailure
from ..text import tokenize
from . import query as q
from .types import (
    AnalysisRecord,
    Document,
    Scalar,
    utc_now,
    validate_document,
    validate_record,
    version_sort_key,
)

_OWNER_DOC = "doc"

_RANGE_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def extract_projected(tool_id: str, paths: Iterable[str], output) -> dict[str, list[Scalar]]:
    """Scalar leaves of ``output`` under each projection path, keyed by path."""
    values: dict[str, list[Scalar]] = {}
    for path in paths:
        segs = path.split(".")
        if segs and segs[0] == tool_id:
            segs = segs[1:]
        found: list[Scalar] = []
        _walk(output, segs, found)
        if found:
            values[path] = found
    return values


def _walk(node, segs: list[str], out: list[Scalar]) -> None:
    if isinstance(node, list):
        for item in node:
            _walk(item, segs, out)
        return
    if not segs:
        if isinstance(node, (str, bool, int, float)) and node is not None:
            out.append(node)
        return
    if isinstance(node, dict) and segs[0] in node:
        _walk(node[segs[0]], segs[1:], out)


class DocStore:
    """SQLite-backed corpus store; safe for concurrent use."""

    def __init__(self, path: str = ":memory:"):
        self._lock = threading.RLock()
        try:
            self._db = sqlite3.connect(path, check_same_thread=False)
            self._init_schema()
        except sqlite3.Error as exc:
            raise StorageFailure(f"cannot open store at {path}: {exc}") from exc
        self._docs: dict[str, Document] = {}
        self._analyses: dict[tuple[str, str, str], AnalysisRecord] = {}
        self._projections: dict[str, list[str]] = {}
        # token -> doc -> sorted token positions (document body)
        self._text_postings: dict[str, dict[str, list[int]]] = {}
        # field -> token -> doc -> refcount (candidates for field matches)
        self._field_tokens: dict[str, dict[str, dict[str, int]]] = {}
        # field -> doc -> owner -> values; owner is "doc" or "tool:<id>"
        self._field_values: dict[str, dict[str, dict[str, list[Scalar]]]] = {}
        self._load()

    # ------------------------------------------------------------ lifecycle

    def _init_schema(self) -> None:
        self._db.executescript(
            """
            CREATE TABLE IF NOT EXISTS documents (
                id TEXT PRIMARY KEY, source TEXT NOT NULL, text TEXT NOT NULL,
                fields TEXT NOT NULL, created_at TEXT NOT NULL);
            CREATE TABLE IF NOT EXISTS analyses (
                doc_id TEXT NOT NULL, tool_id TEXT NOT NULL, tool_version TEXT NOT NULL,
                status TEXT NOT NULL, output TEXT, error_message TEXT, produced_at TEXT NOT NULL,
                PRIMARY KEY (doc_id, tool_id, tool_version));
            CREATE TABLE IF NOT EXISTS projections (
                tool_id TEXT PRIMARY KEY, paths TEXT NOT NULL);
            """
        )
        self._db.commit()

    def _load(self) -> None:
        for tool_id, paths in self._db.execute("SELECT tool_id, paths FROM projections"):
            self._projections[tool_id] = json.loads(paths)
        for row in self._db.execute("SELECT id, source, text, fields, created_at FROM documents"):
            doc = Document(
                id=row[0], source=row[1], text=row[2],
                fields=json.loads(row[3]), created_at=datetime.fromisoformat(row[4]),
            )
            self._docs[doc.id] = doc
            self._index_document(doc)
        pairs = set()
        for row in self._db.execute(
            "SELECT doc_id, tool_id, tool_version, status, output, error_message, produced_at FROM analyses"
        ):
            rec = AnalysisRecord(
                doc_id=row[0], tool_id=row[1], tool_version=row[2], status=row[3],
                output=json.loads(row[4]) if row[4] is not None else None,
                error_message=row[5], produced_at=datetime.fromisoformat(row[6]),
            )
            self._analyses[(rec.doc_id, rec.tool_id, rec.tool_version)] = rec
            pairs.add((rec.doc_id, rec.tool_id))
        for doc_id, tool_id in pairs:
            self._reproject(doc_id, tool_id)

    def close(self) -> None:
        with self._lock:
            self._db.close()

    # ------------------------------------------------------------ documents

    def put_document(self, doc: Document) -> str:
        validate_document(doc)
        if doc.created_at is None:
            doc.created_at = utc_now()
        with self._lock:
            old = self._docs.get(doc.id)
            if old is not None:
                self._unindex_document(old)
            try:
                self._db.execute(
                    "INSERT OR REPLACE INTO documents (id, source, text, fields, created_at) VALUES (?,?,?,?,?)",
                    (doc.id, doc.source, doc.text, json.dumps(doc.fields), doc.created_at.isoformat()),
                )
                self._db.commit()
            except sqlite3.Error as exc:
                raise StorageFailure(str(exc)) from exc
            self._docs[doc.id] = doc
            self._index_document(doc)
        return doc.id

    def get_document(self, doc_id: str) -> Document:
        with self._lock:
            doc = self._docs.get(doc_id)
        if doc is None:
            raise NotFound(f"no document with id {doc_id!r}")
        return doc

    def has_document(self, doc_id: str) -> bool:
        with self._lock:
            return doc_id in self._docs

    def doc_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._docs)

    def count(self) -> int:
        with self._lock:
            return len(self._docs)

    # ------------------------------------------------------------- analyses

    def put_analysis(self, rec: AnalysisRecord) -> None:
        validate_record(rec)
        if rec.produced_at is None:
            rec.produced_at = utc_now()
        with self._lock:
            if rec.doc_id not in self._docs:
                raise NotFound(f"no document with id {rec.doc_id!r}")
            try:
                self._db.execute(
                    "INSERT OR REPLACE INTO analyses (doc_id, tool_id, tool_version, status, output,"
                    " error_message, produced_at) VALUES (?,?,?,?,?,?,?)",
                    (
                        rec.doc_id, rec.tool_id, rec.tool_version, rec.status,
                        json.dumps(rec.output) if rec.output is not None else None,
                        rec.error_message, rec.produced_at.isoformat(),
                    ),
                )
                self._db.commit()
            except sqlite3.Error as exc:
                raise StorageFailure(str(exc)) from exc
            self._analyses[(rec.doc_id, rec.tool_id, rec.tool_version)] = rec
            self._reproject(rec.doc_id, rec.tool_id)

    def get_analysis(self, doc_id: str, tool_id: str, tool_version: str) -> Optional[AnalysisRecord]:
        with self._lock:
            return self._analyses.get((doc_id, tool_id, tool_version))

    def analyses_for_doc(self, doc_id: str) -> list[AnalysisRecord]:
        with self._lock:
            return [rec for key, rec in sorted(self._analyses.items()) if key[0] == doc_id]

    def latest_analyses(self, doc_id: str) -> dict[str, AnalysisRecord]:
        """Latest record per tool (highest version) for one document."""
        latest: dict[str, AnalysisRecord] = {}
        for rec in self.analyses_for_doc(doc_id):
            cur = latest.get(rec.tool_id)
            if cur is None or version_sort_key(rec.tool_version) > version_sort_key(cur.tool_version):
                latest[rec.tool_id] = rec
        return latest

    def set_projections(self, tool_id: str, paths: list[str]) -> None:
        """Register queryable output paths for a tool; reindexes its records."""
        with self._lock:
            self._projections[tool_id] = list(paths)
            self._db.execute(
                "INSERT OR REPLACE INTO projections (tool_id, paths) VALUES (?,?)",
                (tool_id, json.dumps(list(paths))),
            )
            self._db.commit()
            for doc_id, rec_tool in {(k[0], k[1]) for k in self._analyses}:
                if rec_tool == tool_id:
                    self._reproject(doc_id, tool_id)

    def _reproject(self, doc_id: str, tool_id: str) -> None:
        """Re-derive the projected field values from the latest record of one tool."""
        owner = f"tool:{tool_id}"
        self._remove_owner_values(doc_id, owner)
        versions = [k[2] for k in self._analyses if k[0] == doc_id and k[1] == tool_id]
        if not versions:
            return
        latest = self._analyses[(doc_id, tool_id, max(versions, key=version_sort_key))]
        if latest.status != "ok":
            return
        paths = self._projections.get(tool_id, [])
        for field, values in extract_projected(tool_id, paths, latest.output).items():
            for value in values:
                self._add_field_value(field, doc_id, owner, value)

    # ------------------------------------------------------------- indexing

    def _index_document(self, doc: Document) -> None:
        for pos, tok in enumerate(tokenize(doc.text)):
            self._text_postings.setdefault(tok, {}).setdefault(doc.id, []).append(pos)
        # the source enum is queryable like any metadata field
        self._add_field_value("source", doc.id, _OWNER_DOC, doc.source)
        for field, value in doc.fields.items():
            self._add_field_value(field, doc.id, _OWNER_DOC, value)

    def _unindex_document(self, doc: Document) -> None:
        for tok in set(tokenize(doc.text)):
            docs = self._text_postings.get(tok)
            if docs:
                docs.pop(doc.id, None)
                if not docs:
                    del self._text_postings[tok]
        self._remove_owner_values(doc.id, _OWNER_DOC)

    def _add_field_value(self, field: str, doc_id: str, owner: str, value: Scalar) -> None:
        self._field_values.setdefault(field, {}).setdefault(doc_id, {}).setdefault(owner, []).append(value)
        if isinstance(value, str):
            toks = self._field_tokens.setdefault(field, {})
            for tok in tokenize(value):
                per_doc = toks.setdefault(tok, {})
                per_doc[doc_id] = per_doc.get(doc_id, 0) + 1

    def _remove_owner_values(self, doc_id: str, owner: str) -> None:
        for field in list(self._field_values):
            per_doc = self._field_values[field]
            owners = per_doc.get(doc_id)
            if not owners or owner not in owners:
                continue
            values = owners.pop(owner)
            for value in values:
                if isinstance(value, str):
                    toks = self._field_tokens.get(field, {})
                    for tok in tokenize(value):
                        per_tok = toks.get(tok)
                        if per_tok and doc_id in per_tok:
                            per_tok[doc_id] -= 1
                            if per_tok[doc_id] <= 0:
                                del per_tok[doc_id]
                            if not per_tok:
                                del toks[tok]
            if not owners:
                del per_doc[doc_id]
            if not per_doc:
                del self._field_values[field]

    def _doc_field_values(self, field: str, doc_id: str) -> list[Scalar]:
        owners = self._field_values.get(field, {}).get(doc_id, {})
        merged: list[Scalar] = []
        for owner in sorted(owners):
            merged.extend(owners[owner])
        return merged

    def field_values(self, field: str, doc_id: str) -> list[Scalar]:
        """All values of a field for one document, metadata and projections merged."""
        with self._lock:
            return list(self._doc_field_values(field, doc_id))

    # --------------------------------------------------------------- search

    def search(self, ast: q.QueryAst, limit: int, cursor: Optional[str] = None) -> tuple[list[str], Optional[str]]:
        """Matching doc ids ordered by (score desc, id asc), plus a paging cursor."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        offset = 0
        if cursor is not None:
            if not str(cursor).isdigit():
                raise ValueError(f"bad cursor {cursor!r}")
            offset = int(cursor)
        with self._lock:
            ids = self._eval(ast)
            scores = self._score(ast, ids)
        ordered = sorted(ids, key=lambda d: (-scores.get(d, 0.0), d))
        page = ordered[offset : offset + limit]
        next_cursor = str(offset + limit) if offset + limit < len(ordered) else None
        return page, next_cursor

    def search_all(self, ast: q.QueryAst) -> list[str]:
        """All matching ids in ranked order (unbounded paging in one call)."""
        with self._lock:
            ids = self._eval(ast)
            scores = self._score(ast, ids)
        return sorted(ids, key=lambda d: (-scores.get(d, 0.0), d))

    def _eval(self, node: q.QueryAst) -> set[str]:
        if isinstance(node, q.MatchAll):
            return set(self._docs)
        if isinstance(node, q.Term):
            return set(self._term_occurrences(node.field, node.value))
        if isinstance(node, q.Phrase):
            return set(self._phrase_occurrences(node.field, node.words))
        if isinstance(node, q.Range):
            return self._range_ids(node.field, node.op, node.number)
        if isinstance(node, q.And):
            result: Optional[set[str]] = None
            for child in node.children:
                got = self._eval(child)
                result = got if result is None else result & got
                if not result:
                    return set()
            return result or set()
        if isinstance(node, q.Or):
            result: set[str] = set()
            for child in node.children:
                result |= self._eval(child)
            return result
        if isinstance(node, q.Not):
            return set(self._docs) - self._eval(node.child)
        raise TypeError(f"cannot evaluate {type(node).__name__}")

    def _term_occurrences(self, field: str, raw: str) -> dict[str, int]:
        toks = tokenize(raw)
        occ: dict[str, int] = {}
        if field == q.DEFAULT_FIELD:
            if toks:
                for doc_id, count in self._text_run_counts(toks).items():
                    occ[doc_id] = occ.get(doc_id, 0) + count
            return occ
        if toks:
            for doc_id, count in self._field_run_counts(field, toks).items():
                occ[doc_id] = occ.get(doc_id, 0) + count
        # numbers and booleans match by typed equality, not token overlap
        number = None
        try:
            number = float(raw)
        except ValueError:
            pass
        boolean = {"true": True, "false": False}.get(raw.lower())
        if number is not None or boolean is not None:
            for doc_id in self._field_values.get(field, {}):
                for value in self._doc_field_values(field, doc_id):
                    if isinstance(value, bool):
                        if boolean is not None and value == boolean:
                            occ[doc_id] = occ.get(doc_id, 0) + 1
                    elif isinstance(value, (int, float)):
                        if number is not None and float(value) == number:
                            occ[doc_id] = occ.get(doc_id, 0) + 1
        return occ

    def _phrase_occurrences(self, field: str, words: tuple[str, ...]) -> dict[str, int]:
        if not words:
            return {}
        if field == q.DEFAULT_FIELD:
            return self._text_run_counts(list(words))
        return self._field_run_counts(field, list(words))

    def _text_run_counts(self, toks: list[str]) -> dict[str, int]:
        """Docs whose body contains the tokens consecutively, with run counts."""
        postings = [self._text_postings.get(t, {}) for t in toks]
        if any(not p for p in postings):
            return {}
        candidates = set(postings[0])
        for p in postings[1:]:
            candidates &= set(p)
        counts: dict[str, int] = {}
        for doc_id in candidates:
            later = [set(p[doc_id]) for p in postings[1:]]
            runs = sum(
                1
                for start in postings[0][doc_id]
                if all(start + i + 1 in later[i] for i in range(len(later)))
            )
            if runs:
                counts[doc_id] = runs
        return counts

    def _field_run_counts(self, field: str, toks: list[str]) -> dict[str, int]:
        """Docs with a field value containing the tokens consecutively."""
        tok_index = self._field_tokens.get(field, {})
        candidates: Optional[set[str]] = None
        for tok in toks:
            docs = set(tok_index.get(tok, {}))
            candidates = docs if candidates is None else candidates & docs
            if not candidates:
                return {}
        counts: dict[str, int] = {}
        for doc_id in candidates or set():
            runs = 0
            for value in self._doc_field_values(field, doc_id):
                if not isinstance(value, str):
                    continue
                vtoks = tokenize(value)
                runs += sum(
                    1
                    for i in range(len(vtoks) - len(toks) + 1)
                    if vtoks[i : i + len(toks)] == toks
                )
            if runs:
                counts[doc_id] = runs
        return counts

    def _range_ids(self, field: str, op: str, number: float) -> set[str]:
        cmp = _RANGE_CMP[op]
        out = set()
        for doc_id in self._field_values.get(field, {}):
            for value in self._doc_field_values(field, doc_id):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    continue
                if cmp(float(value), number):
                    out.add(doc_id)
                    break
        return out

    def _score(self, ast: q.QueryAst, ids: set[str]) -> dict[str, float]:
        """tf-idf: ln(1+tf) * ln(N/df), summed over every Term/Phrase leaf."""
        n = len(self._docs)
        scores: dict[str, float] = {}
        if not n or not ids:
            return scores
        for node in _leaves(ast):
            if isinstance(node, q.Term):
                occ = self._term_occurrences(node.field, node.value)
            else:
                occ = self._phrase_occurrences(node.field, node.words)
            df = len(occ)
            if not df:
                continue
            idf = math.log(n / df)
            for doc_id, tf in occ.items():
                if doc_id in ids:
                    scores[doc_id] = scores.get(doc_id, 0.0) + math.log(1 + tf) * idf
        return scores


def _leaves(node: q.QueryAst):
    if isinstance(node, (q.Term, q.Phrase)):
        yield node
    elif isinstance(node, (q.And, q.Or)):
        for child in node.children:
            yield from _leaves(child)
    elif isinstance(node, q.Not):
        yield from _leaves(node.child)
