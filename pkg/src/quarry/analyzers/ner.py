"""Baseline named-entity recognition: gazetteer longest-match plus a
capitalization fallback.

Gazetteer hits take their type (and gender, if listed) from the file and
match case-insensitively over token runs, longest run first. Leftover
maximal runs of capitalized tokens become MISC mentions, except
sentence-initial stopwords, which capitalization says nothing about. The
tool slot stays pluggable: an external worker can replace this baseline
without touching the pipeline.
"""

from __future__ import annotations

from .resources import Gazetteer
from .segment import Span, segment
from .types import Mention

#: Sentence-initial tokens that are capitalized by orthography, not by name.
STOPWORDS = {
    "the", "a", "an", "it", "he", "she", "they", "we", "i", "you",
    "this", "that", "these", "those", "there", "here", "but", "and",
    "or", "not", "no", "my", "our", "his", "her", "its", "their",
    "in", "on", "at", "to", "for", "of", "with", "as", "by", "after",
    "before", "when", "while", "if", "so", "then", "rt",
}

PRONOUNS = {
    "he": "he", "him": "he", "his": "he",
    "she": "she", "her": "she", "hers": "she",
    "it": "it", "its": "it",
    "they": "they", "them": "they", "their": "they", "theirs": "they",
}


def ner(
    text: str,
    tokens: list[Span],
    gazetteer: Gazetteer,
    doc_id: str = "",
    sentence_starts: set[int] | None = None,
) -> list[Mention]:
    """Detect entity mentions; deterministic in (text, gazetteer)."""
    if not tokens:
        return []
    if sentence_starts is None:
        sentences, _ = segment(text)
        sentence_starts = {s for s, _ in sentences}

    words = [text[s:e] for s, e in tokens]
    lower = [w.lower() for w in words]
    mentions: list[Mention] = []
    taken = [False] * len(tokens)

    # longest-match gazetteer pass
    i = 0
    while i < len(tokens):
        matched = 0
        entry = None
        for width in range(min(gazetteer.max_tokens, len(tokens) - i), 0, -1):
            candidate = " ".join(lower[i : i + width])
            found = gazetteer.entries.get(candidate)
            if found is not None:
                matched, entry = width, found
                break
        if matched:
            start = tokens[i][0]
            end = tokens[i + matched - 1][1]
            mentions.append(
                Mention(
                    doc_id=doc_id, start=start, end=end, surface=text[start:end],
                    etype=entry.etype, gender=entry.gender,
                )
            )
            for k in range(i, i + matched):
                taken[k] = True
            i += matched
        else:
            i += 1

    # capitalized-run fallback for anything the gazetteer missed
    run_start = None
    for idx in range(len(tokens) + 1):
        capitalized = False
        if idx < len(tokens) and not taken[idx]:
            word = words[idx]
            if word[:1].isupper():
                sentence_initial = tokens[idx][0] in sentence_starts
                if not (sentence_initial and lower[idx] in STOPWORDS):
                    capitalized = True
        if capitalized:
            if run_start is None:
                run_start = idx
        elif run_start is not None:
            start = tokens[run_start][0]
            end = tokens[idx - 1][1]
            mentions.append(
                Mention(doc_id=doc_id, start=start, end=end, surface=text[start:end], etype="MISC")
            )
            run_start = None

    mentions.sort(key=lambda m: (m.start, m.end))
    return mentions


def detect_pronouns(text: str, tokens: list[Span], named: list[Mention], doc_id: str = "") -> list[Mention]:
    """PRONOUN mentions for closed-class tokens outside any named span."""
    occupied = [(m.start, m.end) for m in named]
    out: list[Mention] = []
    for s, e in tokens:
        word = text[s:e].lower()
        if word not in PRONOUNS:
            continue
        if any(s < oe and os_ < e for os_, oe in occupied):
            continue
        out.append(Mention(doc_id=doc_id, start=s, end=e, surface=text[s:e], etype="PRONOUN"))
    return out


def pronoun_class(surface: str) -> str | None:
    return PRONOUNS.get(surface.lower())
