"""Brute-force reference semantics for the query language.

Deliberately independent of the store's index machinery: documents are
evaluated one at a time against the AST, with its own tokenizer and its
own projection walk. Tests compare the store's index-driven search
against a linear scan using this predicate.
"""

from __future__ import annotations

import re

from quarry.docstore import query as q

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


def _tok(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


def project_values(tool_id: str, paths, output) -> dict[str, list]:
    """Independent re-implementation of the projection walk."""
    out: dict[str, list] = {}
    for path in paths:
        segs = path.split(".")
        if segs and segs[0] == tool_id:
            segs = segs[1:]
        hits: list = []
        _descend(output, segs, hits)
        if hits:
            out[path] = hits
    return out


def _descend(node, segs, hits) -> None:
    if isinstance(node, list):
        for item in node:
            _descend(item, segs, hits)
    elif not segs:
        if isinstance(node, (str, bool, int, float)):
            hits.append(node)
    elif isinstance(node, dict) and segs[0] in node:
        _descend(node[segs[0]], segs[1:], hits)


def build_view(
    text: str, fields: dict, projected: dict[str, list] | None = None, source: str = "imported"
) -> dict:
    """A per-document view: body text plus multi-valued field map."""
    merged: dict[str, list] = {name: [value] for name, value in fields.items()}
    merged.setdefault("source", []).append(source)
    for name, values in (projected or {}).items():
        merged.setdefault(name, []).extend(values)
    return {"text": text, "fields": merged}


def _consecutive(haystack: list[str], needle: list[str]) -> bool:
    if not needle:
        return False
    return any(
        haystack[i : i + len(needle)] == needle
        for i in range(len(haystack) - len(needle) + 1)
    )


def _field_token_match(view: dict, field: str, needle: list[str]) -> bool:
    for value in view["fields"].get(field, []):
        if isinstance(value, str) and _consecutive(_tok(value), needle):
            return True
    return False


def matches(ast, view: dict) -> bool:
    """Does one document (as a view) satisfy the query?"""
    if isinstance(ast, q.MatchAll):
        return True
    if isinstance(ast, q.Term):
        toks = _tok(ast.value)
        if ast.field == "text":
            return _consecutive(_tok(view["text"]), toks)
        if toks and _field_token_match(view, ast.field, toks):
            return True
        try:
            number = float(ast.value)
        except ValueError:
            number = None
        boolean = {"true": True, "false": False}.get(ast.value.lower())
        for value in view["fields"].get(ast.field, []):
            if isinstance(value, bool):
                if boolean is not None and value == boolean:
                    return True
            elif isinstance(value, (int, float)):
                if number is not None and float(value) == number:
                    return True
        return False
    if isinstance(ast, q.Phrase):
        needle = list(ast.words)
        if ast.field == "text":
            return _consecutive(_tok(view["text"]), needle)
        return _field_token_match(view, ast.field, needle)
    if isinstance(ast, q.Range):
        ops = {"<": float.__lt__, "<=": float.__le__, ">": float.__gt__, ">=": float.__ge__}
        for value in view["fields"].get(ast.field, []):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                continue
            if ops[ast.op](float(value), ast.number):
                return True
        return False
    if isinstance(ast, q.And):
        return all(matches(c, view) for c in ast.children)
    if isinstance(ast, q.Or):
        return any(matches(c, view) for c in ast.children)
    if isinstance(ast, q.Not):
        return not matches(ast.child, view)
    raise TypeError(f"unknown node {type(ast).__name__}")


def scan(ast, views: dict[str, dict]) -> set[str]:
    """Linear scan over all documents: the oracle id-set."""
    return {doc_id for doc_id, view in views.items() if matches(ast, view)}
