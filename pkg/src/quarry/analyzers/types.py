"""Analyzer domain types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

ENTITY_TYPES = ("PER", "ORG", "LOC", "MISC", "PRONOUN")


@dataclass
class Mention:
    """A span of text referring to an entity (or a pronoun awaiting one)."""

    doc_id: str
    start: int
    end: int
    surface: str
    etype: str
    chain_id: Optional[int] = None
    gender: Optional[str] = None  # "m" | "f" from the gazetteer, else None

    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def to_json(self) -> dict:
        out = {
            "start": self.start,
            "end": self.end,
            "surface": self.surface,
            "etype": self.etype,
        }
        if self.chain_id is not None:
            out["chain_id"] = self.chain_id
        if self.gender is not None:
            out["gender"] = self.gender
        return out

    @classmethod
    def from_json(cls, doc_id: str, data: dict) -> "Mention":
        return cls(
            doc_id=doc_id,
            start=data["start"],
            end=data["end"],
            surface=data["surface"],
            etype=data["etype"],
            chain_id=data.get("chain_id"),
            gender=data.get("gender"),
        )


@dataclass
class KbEntity:
    """A knowledge-base entry; a local stand-in for a public knowledge graph."""

    kb_id: str
    canonical_name: str
    aliases: list[str] = field(default_factory=list)
    etype: str = "MISC"
    description: str = ""

    def all_names(self) -> list[str]:
        names = [self.canonical_name]
        names.extend(a for a in self.aliases if a != self.canonical_name)
        return names


@dataclass
class SentimentResult:
    score: float  # in [-1, 1]
    label: str  # positive | neutral | negative

    def to_json(self) -> dict:
        return {"score": self.score, "label": self.label}


def sentiment_label(score: float) -> str:
    if score >= 0.05:
        return "positive"
    if score <= -0.05:
        return "negative"
    return "neutral"


@dataclass
class SocialGraph:
    """Directed interaction graph; edge weights count interactions."""

    nodes: set[str] = field(default_factory=set)
    # (src, dst, kind) -> weight, kind in {mention, reply, repost}
    edges: dict[tuple[str, str, str], int] = field(default_factory=dict)

    def add_edge(self, src: str, dst: str, kind: str) -> None:
        self.nodes.add(src)
        self.nodes.add(dst)
        key = (src, dst, kind)
        self.edges[key] = self.edges.get(key, 0) + 1

    def edge_list(self) -> list[tuple[str, str, str, int]]:
        return [(s, d, k, w) for (s, d, k), w in sorted(self.edges.items())]

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "edges": [
                {"src": s, "dst": d, "kind": k, "weight": w} for s, d, k, w in self.edge_list()
            ],
        }
