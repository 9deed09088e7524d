"""Lexicon sentiment scorer.

Each token contributes its lexicon valence, adjusted by nearby modifiers:
a negation word within the three preceding tokens flips the sign and
damps it (x -0.74), each intensifier in that window scales by 1.29 and
each dampener by 0.71, and an ALL-CAPS token is emphasized by 1.5. The
raw sum S is squashed to [-1, 1] by S / sqrt(S^2 + 15). The modifier
constants follow the standard rule-based social-media scorer; labels cut
at +/-0.05.
"""

from __future__ import annotations

import math

from ..text import token_spans
from .types import SentimentResult, sentiment_label

NEGATION_SCALAR = -0.74
INTENSIFIER_SCALAR = 1.29
DAMPENER_SCALAR = 0.71
ALLCAPS_SCALAR = 1.5
NORMALIZATION_ALPHA = 15.0
MODIFIER_WINDOW = 3

NEGATORS = {
    "not", "no", "never", "neither", "nor", "none", "nothing", "nobody",
    "cannot", "cant", "without", "hardly", "barely", "scarcely", "rarely", "seldom",
    # contraction stems left by punctuation splitting ("isn't" -> "isn", "t")
    "isn", "aren", "wasn", "weren", "don", "doesn", "didn", "won", "wouldn",
    "couldn", "shouldn", "hasn", "haven", "hadn", "mustn", "needn", "ain",
}

INTENSIFIERS = {
    "very", "really", "extremely", "absolutely", "incredibly", "totally",
    "utterly", "completely", "especially", "particularly", "remarkably",
    "so", "too", "super", "hugely",
}

DAMPENERS = {
    "slightly", "somewhat", "marginally", "partly", "fairly", "kinda",
    "kind", "sort", "almost", "moderately",
}


def raw_sum(text: str, lexicon: dict[str, float]) -> float:
    """Sum of modified token valences before normalization."""
    spans = token_spans(text)
    words = [text[s:e] for s, e in spans]
    lower = [w.lower() for w in words]
    total = 0.0
    for i, token in enumerate(lower):
        valence = lexicon.get(token)
        if valence is None:
            continue
        window = lower[max(0, i - MODIFIER_WINDOW) : i]
        for prev in window:
            if prev in INTENSIFIERS:
                valence *= INTENSIFIER_SCALAR
            elif prev in DAMPENERS:
                valence *= DAMPENER_SCALAR
        if any(prev in NEGATORS for prev in window):
            valence *= NEGATION_SCALAR
        word = words[i]
        if word.isupper() and len(word) > 1 and any(c.isalpha() for c in word):
            valence *= ALLCAPS_SCALAR
        total += valence
    return total


def normalize_score(total: float) -> float:
    score = total / math.sqrt(total * total + NORMALIZATION_ALPHA)
    return max(-1.0, min(1.0, score))


def sentiment(text: str, lexicon: dict[str, float]) -> SentimentResult:
    score = normalize_score(raw_sum(text, lexicon))
    return SentimentResult(score=score, label=sentiment_label(score))
