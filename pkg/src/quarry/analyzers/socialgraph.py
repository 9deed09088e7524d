"""Social interaction graphs and PageRank centrality.

Posts contribute one ``mention`` edge per @handle in the text, a ``reply``
edge when ``reply_to_user`` is set, and a ``repost`` edge for
``repost_of_user``. PageRank collapses edge kinds by summing weights,
drops self-edges (the usual centrality convention), spreads dangling mass
uniformly, and iterates the damped transition until the L1 change falls
below ``eps``.
"""

from __future__ import annotations

import re

from ..docstore.types import Document
from ..errors import EmptyGraph, MissingAuthor
from .types import SocialGraph

_HANDLE_RE = re.compile(r"@(\w+)")


def build_social_graph(posts: list[Document]) -> SocialGraph:
    graph = SocialGraph()
    for post in posts:
        author = post.fields.get("author")
        if not isinstance(author, str) or not author:
            raise MissingAuthor(f"post {post.id!r} has no author field")
        graph.nodes.add(author)
        for handle in _HANDLE_RE.findall(post.text):
            graph.add_edge(author, handle, "mention")
        reply_to = post.fields.get("reply_to_user")
        if isinstance(reply_to, str) and reply_to:
            graph.add_edge(author, reply_to, "reply")
        repost_of = post.fields.get("repost_of_user")
        if isinstance(repost_of, str) and repost_of:
            graph.add_edge(author, repost_of, "repost")
    return graph


def pagerank(
    graph: SocialGraph,
    damping: float = 0.85,
    eps: float = 1e-8,
    max_iter: int = 100,
) -> dict[str, float]:
    """Centrality scores summing to 1; deterministic power iteration."""
    nodes = sorted(graph.nodes)
    if not nodes:
        raise EmptyGraph("cannot rank an empty graph")
    n = len(nodes)

    # collapse kinds, drop self-edges
    weight: dict[tuple[str, str], float] = {}
    for (src, dst, _kind), w in graph.edges.items():
        if src == dst:
            continue
        weight[(src, dst)] = weight.get((src, dst), 0.0) + w
    out_weight: dict[str, float] = {}
    succ: dict[str, list[tuple[str, float]]] = {}
    for (src, dst), w in sorted(weight.items()):
        out_weight[src] = out_weight.get(src, 0.0) + w
        succ.setdefault(src, []).append((dst, w))

    rank = {node: 1.0 / n for node in nodes}
    for _ in range(max_iter):
        dangling = sum(rank[node] for node in nodes if node not in out_weight)
        base = (1.0 - damping) / n + damping * dangling / n
        new = {node: base for node in nodes}
        for src, targets in succ.items():
            share = rank[src] / out_weight[src]
            for dst, w in targets:
                new[dst] += damping * share * w
        delta = sum(abs(new[node] - rank[node]) for node in nodes)
        rank = new
        if delta < eps:
            break
    return rank
