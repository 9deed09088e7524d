"""Social graph construction and PageRank centrality."""

import json
import random
from pathlib import Path

import pytest

from quarry.analyzers import build_social_graph, pagerank
from quarry.analyzers.types import SocialGraph
from quarry.docstore import Document
from quarry.errors import EmptyGraph, MissingAuthor

import pagerank_oracle

FIXTURE = Path(__file__).resolve().parents[0] / ".." / "src" / "quarry" / "assets" / "fixture_corpus.jsonl"


def post(doc_id, author, text="", **extra):
    fields = {"author": author, **extra}
    return Document(id=doc_id, text=text, source="social", fields=fields)


def test_empty_posts_empty_graph():
    g = build_social_graph([])
    assert g.nodes == set() and g.edges == {}


def test_mention_edge():
    g = build_social_graph([post("p1", "a", "hi @b")])
    assert g.edges == {("a", "b", "mention"): 1}
    assert g.nodes == {"a", "b"}


def test_missing_author_raises():
    with pytest.raises(MissingAuthor):
        build_social_graph([Document(id="p1", text="hi", source="social")])


def test_fixture_corpus_hand_counted_edges():
    posts = []
    for line in FIXTURE.read_text().splitlines():
        data = json.loads(line)
        if data["source"] == "social":
            posts.append(Document(id=data["id"], text=data["text"], source="social", fields=data["fields"]))
    assert len(posts) == 6
    g = build_social_graph(posts)
    assert g.edges == {
        ("alice", "bob", "mention"): 1,
        ("bob", "alice", "mention"): 1,
        ("bob", "alice", "reply"): 1,
        ("carol", "dave", "mention"): 1,
        ("dave", "alice", "mention"): 1,
        ("dave", "alice", "repost"): 1,
        ("erin", "alice", "mention"): 1,
        ("erin", "bob", "mention"): 1,
    }
    assert g.nodes == {"alice", "bob", "carol", "dave", "erin"}


def test_repeated_mentions_accumulate_weight():
    g = build_social_graph([post("p1", "a", "@b @b @b")])
    assert g.edges == {("a", "b", "mention"): 3}


# ------------------------------------------------------------------ pagerank


def graph_from(edges: dict) -> SocialGraph:
    g = SocialGraph()
    for (s, d, k), w in edges.items():
        g.nodes.add(s)
        g.nodes.add(d)
        g.edges[(s, d, k)] = w
    return g


def test_single_node():
    g = SocialGraph(nodes={"u"})
    assert pagerank(g) == {"u": 1.0}


def test_two_node_cycle_symmetric():
    g = graph_from({("a", "b", "mention"): 2, ("b", "a", "mention"): 2})
    scores = pagerank(g)
    assert scores["a"] == pytest.approx(0.5, abs=1e-9)
    assert scores["b"] == pytest.approx(0.5, abs=1e-9)


def test_empty_graph_raises():
    with pytest.raises(EmptyGraph):
        pagerank(SocialGraph())


def test_three_node_chain_matches_oracle():
    g = graph_from({("a", "b", "mention"): 1, ("a", "c", "mention"): 1, ("b", "c", "reply"): 1})
    got = pagerank(g)
    want = pagerank_oracle.dense_pagerank(sorted(g.nodes), pagerank_oracle.collapse(g.edges))
    for node in g.nodes:
        assert got[node] == pytest.approx(want[node], abs=1e-6)


def test_scores_sum_to_one():
    g = graph_from({("a", "b", "mention"): 1, ("c", "a", "reply"): 2})
    assert sum(pagerank(g).values()) == pytest.approx(1.0, abs=1e-6)


def test_self_edges_do_not_contribute():
    base = {("a", "b", "mention"): 1, ("b", "a", "mention"): 1}
    with_self = dict(base)
    with_self[("a", "a", "mention")] = 50
    assert pagerank(graph_from(base)) == pagerank(graph_from(with_self))


def test_uniform_weight_scaling_invariance():
    edges = {("a", "b", "mention"): 1, ("b", "c", "reply"): 2, ("c", "a", "repost"): 3}
    scaled = {k: w * 7 for k, w in edges.items()}
    first = pagerank(graph_from(edges))
    second = pagerank(graph_from(scaled))
    for node in first:
        assert first[node] == pytest.approx(second[node], abs=1e-9)


def test_multi_kind_edges_sum_before_ranking():
    merged = graph_from({("a", "b", "mention"): 3})
    split = graph_from({("a", "b", "mention"): 1, ("a", "b", "reply"): 1, ("a", "b", "repost"): 1})
    assert pagerank(merged) == pagerank(split)


def random_social_graph(rng: random.Random, max_nodes: int = 10) -> SocialGraph:
    n = rng.randint(1, max_nodes)
    names = [f"u{i}" for i in range(n)]
    g = SocialGraph(nodes=set(names))
    for src in names:
        for dst in names:
            if rng.random() < 0.3:
                g.edges[(src, dst, rng.choice(["mention", "reply", "repost"]))] = rng.randint(1, 4)
    return g


def test_random_graphs_match_oracle():
    rng = random.Random(2024)
    for _ in range(100):
        g = random_social_graph(rng)
        got = pagerank(g)
        want = pagerank_oracle.dense_pagerank(sorted(g.nodes), pagerank_oracle.collapse(g.edges))
        assert sum(got.values()) == pytest.approx(1.0, abs=1e-6)
        for node in g.nodes:
            assert got[node] == pytest.approx(want[node], abs=1e-6)
