"""Parser behavior: grammar, errors, totality, print/parse fixpoint."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quarry.docstore import query as q
from quarry.docstore import parse_query, print_query
from quarry.errors import QuerySyntaxError


def test_field_term_and_phrase():
    ast = parse_query('author:alice AND text:"nobel prize"')
    assert ast == q.And((q.Term("author", "alice"), q.Phrase("text", ("nobel", "prize"))))


def test_range_clause():
    assert parse_query("sentiment.score >= 0.5") == q.Range("sentiment.score", ">=", 0.5)


def test_unclosed_paren_reports_offset():
    with pytest.raises(QuerySyntaxError) as err:
        parse_query("a AND (b OR")
    assert err.value.offset == 11
    assert err.value.expected  # names the token kinds accepted there


def test_bare_word_targets_text():
    assert parse_query("apple") == q.Term("text", "apple")


def test_keywords_case_insensitive():
    ast = parse_query("a and b or not c")
    assert ast == q.Or((q.And((q.Term("text", "a"), q.Term("text", "b"))), q.Not(q.Term("text", "c"))))


def test_parens_override_precedence():
    ast = parse_query("a AND (b OR c)")
    assert ast == q.And((q.Term("text", "a"), q.Or((q.Term("text", "b"), q.Term("text", "c")))))


def test_empty_query_matches_all():
    assert parse_query("") == q.MatchAll()
    assert parse_query("   \t ") == q.MatchAll()


def test_negative_range_number():
    assert parse_query("stars < -0.5") == q.Range("stars", "<", -0.5)


def test_bad_field_name_rejected():
    with pytest.raises(QuerySyntaxError):
        parse_query("Author:alice")
    with pytest.raises(QuerySyntaxError):
        parse_query("bad name:x AND")


def test_unterminated_phrase():
    with pytest.raises(QuerySyntaxError) as err:
        parse_query('text:"abc')
    assert err.value.offset == len('text:"abc')


def test_byte_offsets_for_multibyte_input():
    # é is two bytes in UTF-8; the offset counts bytes, not characters
    with pytest.raises(QuerySyntaxError) as err:
        parse_query("café AND (")
    assert err.value.offset == len("café AND (".encode("utf-8"))


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=60))
def test_parser_total_on_arbitrary_unicode(s):
    try:
        parse_query(s)
    except QuerySyntaxError:
        pass  # the only acceptable failure mode


# --- print/parse fixpoint -------------------------------------------------

_words = st.sampled_from(["apple", "banana", "q312_local", "x9", "frucht", "été"])
_fields = st.sampled_from(["text", "author", "sentiment.score", "entities.kb_id", "lang"])


def _ast_strategy():
    leaf = st.one_of(
        st.builds(q.Term, _fields, _words),
        st.builds(q.Phrase, _fields, st.lists(_words, min_size=1, max_size=3).map(tuple)),
        st.builds(
            q.Range,
            _fields,
            st.sampled_from(["<", "<=", ">", ">="]),
            st.floats(min_value=-100, max_value=100, allow_nan=False).map(lambda x: round(x, 3)),
        ),
    )
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda c: q.And(tuple(c))),
            st.lists(inner, min_size=2, max_size=3).map(lambda c: q.Or(tuple(c))),
            inner.map(q.Not),
        ),
        max_leaves=8,
    )


@settings(max_examples=300, deadline=None)
@given(_ast_strategy())
def test_print_parse_fixpoint(ast):
    assert parse_query(print_query(ast)) == ast


def test_print_parse_fixpoint_matchall():
    assert parse_query(print_query(q.MatchAll())) == q.MatchAll()
