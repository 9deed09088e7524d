"""Tokenization shared by the index, the query matcher, and the analyzers.

One rule everywhere: a token is a maximal run of unicode word characters.
Splitting on whitespace and punctuation with no stemming keeps the index
deterministic and language-neutral; the analyzers use the same runs but
keep the original case and character offsets.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased index tokens for ``text``."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def token_spans(text: str) -> list[tuple[int, int]]:
    """(start, end) character offsets of each token, case preserved in the source."""
    return [m.span() for m in _TOKEN_RE.finditer(text)]
