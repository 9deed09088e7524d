"""Lexicon sentiment: formula cases, modifier rules, bounds."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quarry.analyzers import sentiment
from quarry.analyzers.sentiment import raw_sum

LEXICON = {"good": 1.9, "great": 3.1, "bad": -2.5, "terrible": -2.1}


def squash(total: float) -> float:
    """The stated normalization, written out independently."""
    return total / math.sqrt(total * total + 15.0)


def test_empty_text_is_neutral():
    result = sentiment("", LEXICON)
    assert result.score == 0.0 and result.label == "neutral"


def test_single_positive_token():
    result = sentiment("good", LEXICON)
    assert result.score == pytest.approx(squash(1.9), abs=1e-9)
    assert round(result.score, 3) == 0.440
    assert result.label == "positive"


def test_negation_flips_and_damps():
    result = sentiment("not good", LEXICON)
    assert result.score == pytest.approx(squash(-0.74 * 1.9), abs=1e-9)
    assert round(result.score, 3) == -0.341
    assert result.label == "negative"


def test_negation_window_is_three_tokens():
    near = sentiment("not very very good", LEXICON)  # negator 3 back: applies
    far = sentiment("not a b c good", LEXICON)  # negator 4 back: out of window
    assert near.score < 0
    assert far.score == pytest.approx(squash(1.9), abs=1e-9)


def test_intensifier_scales_up():
    result = sentiment("very good", LEXICON)
    assert result.score == pytest.approx(squash(1.29 * 1.9), abs=1e-9)


def test_dampener_scales_down():
    result = sentiment("slightly good", LEXICON)
    assert result.score == pytest.approx(squash(0.71 * 1.9), abs=1e-9)


def test_allcaps_emphasis():
    result = sentiment("GOOD", LEXICON)
    assert result.score == pytest.approx(squash(1.5 * 1.9), abs=1e-9)


def test_tokens_sum():
    result = sentiment("good then terrible", LEXICON)
    assert result.score == pytest.approx(squash(1.9 - 2.1), abs=1e-9)


def test_labels_cut_at_plus_minus_005():
    assert sentiment("good", LEXICON).label == "positive"
    assert sentiment("bad", LEXICON).label == "negative"
    assert sentiment("nothing here", {}).label == "neutral"


VOCAB = ["good", "great", "bad", "terrible", "not", "very", "slightly", "the", "a", "x", "GOOD", "NOT"]


@settings(max_examples=500, deadline=None)
@given(st.lists(st.sampled_from(VOCAB), max_size=30))
def test_score_always_in_unit_interval(tokens):
    result = sentiment(" ".join(tokens), LEXICON)
    assert -1.0 <= result.score <= 1.0


def test_random_sequences_bounded_bulk():
    rng = random.Random(42)
    for _ in range(2000):
        text = " ".join(rng.choices(VOCAB, k=rng.randint(0, 25)))
        assert -1.0 <= sentiment(text, LEXICON).score <= 1.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["good", "the", "x", "great"]), max_size=15))
def test_appending_positive_token_never_decreases_raw_sum(tokens):
    # no negators/intensifiers anywhere, so the window rule cannot fire
    base = " ".join(tokens)
    extended = (base + " good").strip()
    assert raw_sum(extended, LEXICON) >= raw_sum(base, LEXICON)
