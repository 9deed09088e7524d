"""Coreference by recency and type agreement.

Named mentions with the same normalized surface share a chain. Each
pronoun links to the nearest preceding mention whose (effective) entity
type agrees with the pronoun's class; anything unresolvable becomes a
singleton chain. Chain ids are assigned in order of first appearance.

Agreement table (an approximation of the classic heuristic; the gendered
names live in the gazetteer so it can be localized):

    he/him/his      PER whose gender is male or unlisted
    she/her/hers    PER whose gender is female or unlisted
    it/its          ORG, LOC or MISC
    they/them/...   ORG, or a mention whose surface looks plural, or a
                    chain already referenced by a plural pronoun
"""

from __future__ import annotations

from .ner import pronoun_class
from .types import Mention


def coref(text: str, mentions: list[Mention]) -> list[Mention]:
    """Assign chain_id to every mention; returns the same mentions sorted by span."""
    ordered = sorted(mentions, key=lambda m: (m.start, m.end))

    # union named mentions by normalized surface
    chain_of: dict[int, int] = {}  # index into ordered -> provisional chain key
    surface_chain: dict[str, int] = {}
    next_key = 0
    plural_chains: set[int] = set()

    for idx, mention in enumerate(ordered):
        if mention.etype == "PRONOUN":
            continue
        norm = _normalize(mention.surface)
        if norm in surface_chain:
            chain_of[idx] = surface_chain[norm]
        else:
            surface_chain[norm] = next_key
            chain_of[idx] = next_key
            next_key += 1

    # resolve pronouns against preceding mentions, nearest first
    for idx, mention in enumerate(ordered):
        if mention.etype != "PRONOUN":
            continue
        klass = pronoun_class(mention.surface)
        antecedent = None
        for prev in range(idx - 1, -1, -1):
            cand = ordered[prev]
            if cand.etype == "PRONOUN" and prev not in chain_of:
                continue  # unresolved pronouns cannot anchor anything
            if _agrees(klass, cand, ordered, chain_of, plural_chains, prev):
                antecedent = prev
                break
        if antecedent is not None:
            chain_of[idx] = chain_of[antecedent]
            if klass == "they":
                plural_chains.add(chain_of[antecedent])
        else:
            chain_of[idx] = next_key
            next_key += 1

    # renumber chains by first appearance
    renumber: dict[int, int] = {}
    for idx, mention in enumerate(ordered):
        key = chain_of[idx]
        if key not in renumber:
            renumber[key] = len(renumber)
        mention.chain_id = renumber[key]
    return ordered


def _normalize(surface: str) -> str:
    return " ".join(surface.lower().split())


def _effective(cand: Mention, ordered: list[Mention], chain_of: dict[int, int], prev: int) -> tuple[str, str | None]:
    """(etype, gender) a candidate contributes: pronouns inherit their chain's head."""
    if cand.etype != "PRONOUN":
        return cand.etype, cand.gender
    key = chain_of.get(prev)
    if key is None:
        return "PRONOUN", None
    for idx, other in enumerate(ordered):
        if chain_of.get(idx) == key and other.etype != "PRONOUN":
            return other.etype, other.gender
    return "PRONOUN", None


def _agrees(
    klass: str | None,
    cand: Mention,
    ordered: list[Mention],
    chain_of: dict[int, int],
    plural_chains: set[int],
    prev: int,
) -> bool:
    if klass is None:
        return False
    etype, gender = _effective(cand, ordered, chain_of, prev)
    if etype == "PRONOUN":
        return False
    if klass == "he":
        return etype == "PER" and gender in (None, "m")
    if klass == "she":
        return etype == "PER" and gender in (None, "f")
    if klass == "it":
        return etype in ("ORG", "LOC", "MISC")
    if klass == "they":
        if etype == "ORG":
            return True
        if _normalize(cand.surface).endswith("s"):
            return True
        return chain_of.get(prev) in plural_chains
    return False
