"""Sentence/token segmentation."""

from quarry.analyzers import segment


def test_empty_text():
    assert segment("") == ([], [])


def test_single_sentence_tokens_with_offsets():
    sentences, tokens = segment("Hi there.")
    assert sentences == [(0, 9)]
    assert tokens == [(0, 2), (3, 8)]


def test_abbreviation_does_not_split():
    sentences, _ = segment("Dr. Smith left. She ran.")
    assert len(sentences) == 2
    text = "Dr. Smith left. She ran."
    assert text[slice(*sentences[0])] == "Dr. Smith left."
    assert text[slice(*sentences[1])] == "She ran."


def test_question_and_exclamation():
    text = "Really? Yes! Sure."
    sentences, _ = segment(text)
    assert [text[slice(*s)] for s in sentences] == ["Really?", "Yes!", "Sure."]


def test_terminal_without_capital_does_not_split():
    sentences, _ = segment("version 2.5 shipped today")
    assert len(sentences) == 1


def test_trailing_text_without_terminal():
    text = "First one. and a tail"
    sentences, _ = segment(text)
    # lowercase after the period: no boundary, single sentence
    assert [text[slice(*s)] for s in sentences] == [text]


def test_tokens_preserve_case_spans():
    text = "Annie Ernaux won."
    _, tokens = segment(text)
    assert [text[slice(*t)] for t in tokens] == ["Annie", "Ernaux", "won"]
