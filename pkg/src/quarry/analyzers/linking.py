"""Entity linking: fuzzy name candidates ranked by name similarity plus
context/description similarity.

Candidate generation takes every KB entity whose best alias reaches 0.5
trigram Jaccard against the mention surface. Ranking blends name
similarity (0.4) with the cosine between hashed bag-of-words embeddings
(0.6) of the mention's sentence and the entity description; the winner
must clear 0.35 or the mention stays unlinked. The embedding is a
deterministic 256-dimension stand-in for a neural sentence encoder:
tokens are bucketed by a multiplicative string hash, weighted by term
frequency, and L2-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..text import tokenize
from .segment import Span, sentence_of
from .types import KbEntity, Mention

EMBED_DIM = 256

NAME_WEIGHT = 0.4
CONTEXT_WEIGHT = 0.6
CANDIDATE_THRESHOLD = 0.5
ACCEPT_THRESHOLD = 0.35


@dataclass
class LinkResult:
    mention: Mention
    kb_id: str | None
    score: float


def _hash_token(token: str) -> int:
    h = 0
    for ch in token:
        h = (h * 31 + ord(ch)) & 0xFFFFFFFF
    return h % EMBED_DIM


def embed(text: str) -> np.ndarray:
    """Hashed bag-of-words vector, tf-weighted, unit length (zero if no tokens)."""
    vec = np.zeros(EMBED_DIM, dtype=np.float64)
    for token in tokenize(text):
        vec[_hash_token(token)] += 1.0
    norm = float(np.linalg.norm(vec))
    if norm > 0:
        vec /= norm
    return vec


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a, b))


def trigrams(s: str) -> set[str]:
    s = " ".join(tokenize(s))
    if len(s) < 3:
        return {s} if s else set()
    return {s[i : i + 3] for i in range(len(s) - 2)}


def trigram_jaccard(a: str, b: str) -> float:
    ta, tb = trigrams(a), trigrams(b)
    if not ta and not tb:
        return 1.0
    union = ta | tb
    if not union:
        return 0.0
    return len(ta & tb) / len(union)


def name_similarity(surface: str, entity: KbEntity) -> float:
    return max((trigram_jaccard(surface, alias) for alias in entity.all_names()), default=0.0)


def link_entities(
    mentions: list[Mention],
    text: str,
    kb: dict[str, KbEntity],
    sentences: list[Span] | None = None,
    name_weight: float = NAME_WEIGHT,
    context_weight: float = CONTEXT_WEIGHT,
    candidate_threshold: float = CANDIDATE_THRESHOLD,
    accept_threshold: float = ACCEPT_THRESHOLD,
) -> list[LinkResult]:
    """Link each mention to its best KB entity, or none. Pronouns are never linked."""
    if sentences is None:
        from .segment import segment

        sentences, _ = segment(text)

    description_vecs = {kb_id: embed(ent.description) for kb_id, ent in kb.items()}
    results: list[LinkResult] = []
    for mention in mentions:
        if mention.etype == "PRONOUN":
            results.append(LinkResult(mention, None, 0.0))
            continue
        candidates: list[tuple[str, float]] = []
        for kb_id in sorted(kb):
            sim = name_similarity(mention.surface, kb[kb_id])
            if sim >= candidate_threshold:
                candidates.append((kb_id, sim))
        if not candidates:
            results.append(LinkResult(mention, None, 0.0))
            continue
        span = sentence_of(sentences, mention.start)
        context = text[span[0] : span[1]] if span else text
        context_vec = embed(context)
        best_id, best_score = None, -1.0
        for kb_id, sim in candidates:
            score = name_weight * sim + context_weight * cosine(context_vec, description_vecs[kb_id])
            if score > best_score:
                best_id, best_score = kb_id, score
        if best_score < accept_threshold:
            results.append(LinkResult(mention, None, round(best_score, 6)))
        else:
            results.append(LinkResult(mention, best_id, round(best_score, 6)))
    return results
