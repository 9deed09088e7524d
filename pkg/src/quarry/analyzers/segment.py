"""Sentence and token segmentation.

Tokens follow the index tokenizer's runs but keep case and character
offsets. Sentences split after ``. ? !`` when whitespace and a capital
letter follow, unless the word before the period is a known abbreviation.
"""

from __future__ import annotations

from ..text import token_spans

Span = tuple[int, int]

ABBREVIATIONS = {
    "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr", "vs", "etc",
    "inc", "co", "corp", "ltd", "no", "vol", "fig", "al", "approx",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
    "u.s", "e.g", "i.e",
}

_TERMINALS = ".?!"


def segment(text: str) -> tuple[list[Span], list[Span]]:
    """(sentence spans, token spans) over ``text``; empty text yields ([], [])."""
    tokens = token_spans(text)
    if not text.strip():
        return [], tokens

    boundaries: list[int] = []  # index one past each sentence-final terminal
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _TERMINALS:
            # absorb runs like "?!" or "..."
            j = i
            while j + 1 < n and text[j + 1] in _TERMINALS:
                j += 1
            if ch == "." and _is_abbreviation(text, i):
                i = j + 1
                continue
            k = j + 1
            saw_space = False
            while k < n and text[k].isspace():
                saw_space = True
                k += 1
            if saw_space and k < n and text[k].isupper():
                boundaries.append(j + 1)
            i = j + 1
        else:
            i += 1

    sentences: list[Span] = []
    start = 0
    for b in boundaries:
        span = _trim(text, start, b)
        if span:
            sentences.append(span)
        start = b
    tail = _trim(text, start, n)
    if tail:
        sentences.append(tail)
    return sentences, tokens


def _is_abbreviation(text: str, dot: int) -> bool:
    """Is the word ending at ``dot`` a listed abbreviation ("Dr.", "e.g.")?"""
    j = dot - 1
    while j >= 0 and (text[j].isalnum() or text[j] == "."):
        j -= 1
    word = text[j + 1 : dot].lower()
    return word in ABBREVIATIONS


def _trim(text: str, start: int, end: int) -> Span | None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return (start, end) if start < end else None


def sentence_of(sentences: list[Span], pos: int) -> Span | None:
    """The sentence span containing character ``pos``, if any."""
    for s, e in sentences:
        if s <= pos < e:
            return (s, e)
    # positions in trailing whitespace bind to the preceding sentence
    for s, e in reversed(sentences):
        if pos >= e:
            return (s, e)
    return sentences[0] if sentences else None
