"""Entity linking: candidate generation, blended scoring, thresholds.

Expected scores are computed by a from-scratch re-implementation of the
hashed bag-of-words embedding in this file, so a typo in the package
implementation cannot hide.
"""

import math

import pytest

from quarry.analyzers import embed, link_entities, segment, trigram_jaccard
from quarry.analyzers.types import KbEntity, Mention
from quarry.errors import KbMissing
from quarry.analyzers.resources import load_kb


# ---- independent embedding re-implementation (pure python) ---------------

import re

_WORD = re.compile(r"\w+")


def oracle_embed(text: str) -> list[float]:
    vec = [0.0] * 256
    for tok in (m.group(0).lower() for m in _WORD.finditer(text)):
        h = 0
        for ch in tok:
            h = (h * 31 + ord(ch)) & 0xFFFFFFFF
        vec[h % 256] += 1.0
    norm = math.sqrt(sum(v * v for v in vec))
    return [v / norm for v in vec] if norm else vec


def oracle_cosine(a: list[float], b: list[float]) -> float:
    return sum(x * y for x, y in zip(a, b))


def test_package_embedding_matches_oracle():
    for text in ("", "Apple released a new phone.", "fruit of the apple tree", "döner kebab!"):
        got = embed(text)
        want = oracle_embed(text)
        assert max(abs(g - w) for g, w in zip(got, want)) < 1e-12


def test_embedding_is_unit_length_or_zero():
    assert abs(sum(v * v for v in embed("some words here")) - 1.0) < 1e-12
    assert sum(abs(v) for v in embed("!!!")) == 0.0


# ---- trigram jaccard ------------------------------------------------------


def test_trigram_jaccard_identity():
    assert trigram_jaccard("Apple", "apple") == 1.0


def test_trigram_jaccard_disjoint():
    assert trigram_jaccard("Zzyzx", "apple") == 0.0


def test_trigram_jaccard_short_strings():
    assert trigram_jaccard("ab", "ab") == 1.0
    assert trigram_jaccard("ab", "cd") == 0.0


# ---- linking ---------------------------------------------------------------


def mention(text: str, surface: str, etype: str = "ORG") -> Mention:
    start = text.index(surface)
    return Mention(doc_id="d", start=start, end=start + len(surface), surface=surface, etype=etype)


def link_one(text: str, m: Mention, kb: dict):
    sentences, _ = segment(text)
    return link_entities([m], text, kb, sentences=sentences)[0]


def test_context_disambiguates_company_from_fruit():
    text = "Apple released a new phone."
    kb = {
        "Q312_local": KbEntity(
            kb_id="Q312_local", canonical_name="Apple Inc.", aliases=["Apple"], etype="ORG",
            description="technology company that released a new phone this year",
        ),
        "Q89_local": KbEntity(
            kb_id="Q89_local", canonical_name="apple", etype="MISC",
            description="fruit of the apple tree",
        ),
    }
    ctx = oracle_embed(text)  # single sentence: the context is the whole text
    score = {
        kb_id: 0.4 * max(trigram_jaccard("Apple", name) for name in [ent.canonical_name] + ent.aliases)
        + 0.6 * oracle_cosine(ctx, oracle_embed(ent.description))
        for kb_id, ent in kb.items()
    }
    assert score["Q312_local"] > score["Q89_local"]  # shared context tokens win

    result = link_one(text, mention(text, "Apple"), kb)
    assert result.kb_id == "Q312_local"
    assert result.score == pytest.approx(score["Q312_local"], abs=1e-6)


def test_no_candidate_above_threshold_yields_none():
    text = "Zzyzx appeared."
    kb = {"Q1": KbEntity(kb_id="Q1", canonical_name="apple", description="fruit")}
    result = link_one(text, mention(text, "Zzyzx", etype="MISC"), kb)
    assert result.kb_id is None


def test_exact_alias_identical_context_scores_one():
    text = "Apple"
    kb = {"Q1": KbEntity(kb_id="Q1", canonical_name="Apple", description="Apple")}
    result = link_one(text, mention(text, "Apple"), kb)
    assert result.kb_id == "Q1"
    assert result.score == pytest.approx(1.0, abs=1e-9)


def test_pronouns_never_link():
    text = "She arrived."
    m = Mention(doc_id="d", start=0, end=3, surface="She", etype="PRONOUN")
    kb = {"Q1": KbEntity(kb_id="Q1", canonical_name="She", description="x")}
    result = link_one(text, m, kb)
    assert result.kb_id is None and result.score == 0.0


def test_determinism():
    text = "Apple released a new phone."
    kb = {
        "Q1": KbEntity(kb_id="Q1", canonical_name="Apple", description="phone maker"),
        "Q2": KbEntity(kb_id="Q2", canonical_name="apple", description="a fruit"),
    }
    first = link_one(text, mention(text, "Apple"), kb)
    second = link_one(text, mention(text, "Apple"), kb)
    assert (first.kb_id, first.score) == (second.kb_id, second.score)


def test_missing_kb_file():
    with pytest.raises(KbMissing):
        load_kb("/nonexistent/kb.jsonl")
