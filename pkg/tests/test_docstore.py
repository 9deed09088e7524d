"""Store behavior: round-trips, replacement, projections, search, persistence."""

import threading

import pytest

from quarry.docstore import AnalysisRecord, DocStore, Document, parse_query
from quarry.docstore import query as q
from quarry.errors import InvalidDocument, InvalidRecord, NotFound

import query_oracle


@pytest.fixture
def store():
    s = DocStore()
    yield s
    s.close()


def test_round_trip_identity(store):
    doc = Document(id="d1", text="Annie Ernaux won.", fields={"lang": "fr"})
    assert store.put_document(doc) == "d1"
    got = store.get_document("d1")
    assert got.text == "Annie Ernaux won."
    assert got.fields == {"lang": "fr"}
    assert got.created_at is not None


def test_bad_field_name_rejected(store):
    with pytest.raises(InvalidDocument):
        store.put_document(Document(id="d1", text="x", fields={"Sent Score!": 1}))


def test_non_scalar_field_rejected(store):
    with pytest.raises(InvalidDocument):
        store.put_document(Document(id="d1", fields={"nested": {"a": 1}}))


def test_put_twice_replaces(store):
    store.put_document(Document(id="d1", text="first"))
    store.put_document(Document(id="d1", text="x"))
    assert store.get_document("d1").text == "x"
    # index reflects the replacement
    assert store.search_all(parse_query("first")) == []
    assert store.search_all(parse_query("x")) == ["d1"]


def test_get_unknown_raises(store):
    with pytest.raises(NotFound):
        store.get_document("zz")


def test_match_all_and_term(store):
    for i, text in enumerate(["apple pie", "banana", "apple juice"]):
        store.put_document(Document(id=f"d{i}", text=text))
    ids, cursor = store.search(q.MatchAll(), limit=10)
    assert sorted(ids) == ["d0", "d1", "d2"] and cursor is None
    assert set(store.search_all(q.Term("text", "apple"))) == {"d0", "d2"}
    assert store.search_all(q.Term("text", "banana")) == ["d1"]


def test_pagination_cursor(store):
    for i in range(5):
        store.put_document(Document(id=f"d{i}", text="same tokens"))
    page1, cur = store.search(q.MatchAll(), limit=2)
    assert page1 == ["d0", "d1"] and cur == "2"
    page2, cur = store.search(q.MatchAll(), limit=2, cursor=cur)
    assert page2 == ["d2", "d3"]
    page3, cur = store.search(q.MatchAll(), limit=2, cursor=cur)
    assert page3 == ["d4"] and cur is None


def test_limit_must_be_positive(store):
    store.put_document(Document(id="d1"))
    with pytest.raises(ValueError):
        store.search(q.MatchAll(), limit=0)


def test_unknown_field_matches_nothing(store):
    store.put_document(Document(id="d1", text="apple"))
    assert store.search_all(q.Term("ghost.field", "apple")) == []
    assert store.search_all(q.Range("ghost.field", ">=", 0)) == []


def test_analysis_projection_searchable(store):
    store.put_document(Document(id="d1", text="good day"))
    store.set_projections("sentiment", ["sentiment.score", "sentiment.label"])
    store.put_analysis(
        AnalysisRecord(doc_id="d1", tool_id="sentiment", tool_version="1", status="ok",
                       output={"score": 0.7, "label": "positive"})
    )
    assert store.search_all(q.Range("sentiment.score", ">=", 0.5)) == ["d1"]
    assert store.search_all(q.Term("sentiment.label", "positive")) == ["d1"]
    assert store.search_all(q.Range("sentiment.score", ">=", 0.8)) == []


def test_analysis_replace_same_key(store):
    store.put_document(Document(id="d1"))
    store.set_projections("sentiment", ["sentiment.score"])
    for score in (0.2, 0.9):
        store.put_analysis(
            AnalysisRecord(doc_id="d1", tool_id="sentiment", tool_version="1", status="ok",
                           output={"score": score})
        )
    rec = store.get_analysis("d1", "sentiment", "1")
    assert rec.output["score"] == 0.9
    assert store.search_all(q.Range("sentiment.score", ">=", 0.5)) == ["d1"]
    assert store.search_all(q.Range("sentiment.score", "<", 0.5)) == []


def test_analysis_version_is_part_of_key(store):
    store.put_document(Document(id="d1"))
    store.put_analysis(
        AnalysisRecord(doc_id="d1", tool_id="ner", tool_version="1", status="ok", output={"m": []})
    )
    assert store.get_analysis("d1", "ner", "2") is None
    assert store.get_analysis("d1", "ner", "1") is not None


def test_analysis_for_missing_doc(store):
    with pytest.raises(NotFound):
        store.put_analysis(
            AnalysisRecord(doc_id="nope", tool_id="t", tool_version="1", status="ok", output={})
        )


def test_record_invariants(store):
    store.put_document(Document(id="d1"))
    with pytest.raises(InvalidRecord):
        store.put_analysis(AnalysisRecord(doc_id="d1", tool_id="t", tool_version="1", status="ok"))
    with pytest.raises(InvalidRecord):
        store.put_analysis(AnalysisRecord(doc_id="d1", tool_id="t", tool_version="1", status="error"))


def test_latest_analyses_picks_highest_version(store):
    store.put_document(Document(id="d1"))
    for version in ("1.9", "1.10", "1.2"):
        store.put_analysis(
            AnalysisRecord(doc_id="d1", tool_id="ner", tool_version=version, status="ok",
                           output={"v": version})
        )
    assert store.latest_analyses("d1")["ner"].tool_version == "1.10"


def test_document_replacement_keeps_analysis_cache(store):
    store.put_document(Document(id="d1", text="old"))
    store.put_analysis(
        AnalysisRecord(doc_id="d1", tool_id="t", tool_version="1", status="ok", output={"x": 1})
    )
    store.put_document(Document(id="d1", text="new"))
    assert store.get_analysis("d1", "t", "1") is not None


def test_and_with_range_equals_brute_force(store):
    store.set_projections("sentiment", ["sentiment.score"])
    views = {}
    corpus = [
        ("d1", "apple pie", 0.4),
        ("d2", "apple tart", -0.2),
        ("d3", "banana split", 0.9),
        ("d4", "apple sauce", None),
    ]
    for doc_id, text, score in corpus:
        store.put_document(Document(id=doc_id, text=text))
        projected = {}
        if score is not None:
            output = {"score": score}
            store.put_analysis(
                AnalysisRecord(doc_id=doc_id, tool_id="sentiment", tool_version="1",
                               status="ok", output=output)
            )
            projected = query_oracle.project_values("sentiment", ["sentiment.score"], output)
        views[doc_id] = query_oracle.build_view(text, {}, projected)
    ast = q.And((q.Term("text", "apple"), q.Range("sentiment.score", ">=", 0)))
    assert set(store.search_all(ast)) == query_oracle.scan(ast, views) == {"d1"}


def test_tfidf_ranking_prefers_higher_tf(store):
    store.put_document(Document(id="a", text="apple apple apple"))
    store.put_document(Document(id="b", text="apple pear"))
    store.put_document(Document(id="c", text="pear plum"))
    assert store.search_all(q.Term("text", "apple")) == ["a", "b"]


def test_persistence_across_reopen(tmp_path):
    path = str(tmp_path / "corpus.db")
    s1 = DocStore(path)
    s1.set_projections("sentiment", ["sentiment.score"])
    s1.put_document(Document(id="d1", text="persistent apple"))
    s1.put_analysis(
        AnalysisRecord(doc_id="d1", tool_id="sentiment", tool_version="1", status="ok",
                       output={"score": 0.6})
    )
    s1.close()

    s2 = DocStore(path)
    assert s2.get_document("d1").text == "persistent apple"
    assert s2.search_all(q.Term("text", "apple")) == ["d1"]
    assert s2.search_all(q.Range("sentiment.score", ">", 0.5)) == ["d1"]
    s2.close()


def test_concurrent_writers_and_readers(store):
    errors = []

    def writer(k):
        try:
            for i in range(20):
                store.put_document(Document(id=f"w{k}-{i}", text=f"tok{k} common"))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    def reader():
        try:
            for _ in range(40):
                store.search_all(q.Term("text", "common"))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(4)]
    threads += [threading.Thread(target=reader) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(store.search_all(q.Term("text", "common"))) == 80
