"""Native tool wrappers: adapt the analyzer functions to the task contract.

A tool callable receives the document text and fields plus the outputs of
its declared dependencies, and returns a JSON-serializable output tree.
The same payload shape travels in the worker protocol's Assign message,
so a native tool and an external worker are interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from ..pipeline import ToolSpec
from .coref import coref
from .linking import link_entities
from .ner import detect_pronouns, ner
from .resources import Gazetteer, load_gazetteer, load_kb, load_lexicon
from .segment import segment
from .sentiment import sentiment
from .types import KbEntity, Mention


@dataclass
class ToolInputs:
    doc_id: str
    text: str
    fields: dict = field(default_factory=dict)
    deps: dict[str, Any] = field(default_factory=dict)  # tool_id -> that tool's output

    @classmethod
    def from_wire(cls, doc_id: str, inputs: dict) -> "ToolInputs":
        return cls(
            doc_id=doc_id,
            text=inputs.get("text", ""),
            fields=inputs.get("fields", {}),
            deps=inputs.get("deps", {}),
        )

    def to_wire(self) -> dict:
        return {"text": self.text, "fields": self.fields, "deps": self.deps}


@dataclass
class AnalyzerResources:
    gazetteer: Gazetteer
    lexicon: dict[str, float]
    kb: dict[str, KbEntity]

    @classmethod
    def load(cls, gazetteer_path: str, lexicon_path: str, kb_path: str) -> "AnalyzerResources":
        return cls(
            gazetteer=load_gazetteer(gazetteer_path),
            lexicon=load_lexicon(lexicon_path),
            kb=load_kb(kb_path),
        )


DEFAULT_TOOL_SPECS = [
    ToolSpec(tool_id="segment", version="1"),
    ToolSpec(tool_id="ner", version="1", depends_on=["segment"]),
    ToolSpec(tool_id="coref", version="1", depends_on=["ner", "segment"]),
    ToolSpec(
        tool_id="entity_linking",
        version="1",
        depends_on=["coref", "segment"],
        output_projections=["entities.kb_id"],
    ),
    ToolSpec(
        tool_id="sentiment",
        version="1",
        output_projections=["sentiment.score", "sentiment.label"],
    ),
]


def _spans_json(spans) -> list[list[int]]:
    return [[s, e] for s, e in spans]


def run_segment(inputs: ToolInputs, _res: AnalyzerResources) -> dict:
    sentences, tokens = segment(inputs.text)
    return {"sentences": _spans_json(sentences), "tokens": _spans_json(tokens)}


def run_ner(inputs: ToolInputs, res: AnalyzerResources) -> dict:
    seg = inputs.deps["segment"]
    tokens = [tuple(t) for t in seg["tokens"]]
    starts = {s for s, _ in seg["sentences"]}
    mentions = ner(inputs.text, tokens, res.gazetteer, doc_id=inputs.doc_id, sentence_starts=starts)
    return {"mentions": [m.to_json() for m in mentions]}


def run_coref(inputs: ToolInputs, _res: AnalyzerResources) -> dict:
    seg = inputs.deps["segment"]
    tokens = [tuple(t) for t in seg["tokens"]]
    named = [Mention.from_json(inputs.doc_id, m) for m in inputs.deps["ner"]["mentions"]]
    pronouns = detect_pronouns(inputs.text, tokens, named, doc_id=inputs.doc_id)
    chained = coref(inputs.text, named + pronouns)
    n_chains = len({m.chain_id for m in chained}) if chained else 0
    return {"mentions": [m.to_json() for m in chained], "chain_count": n_chains}


def run_entity_linking(inputs: ToolInputs, res: AnalyzerResources) -> dict:
    seg = inputs.deps["segment"]
    sentences = [tuple(s) for s in seg["sentences"]]
    mentions = [Mention.from_json(inputs.doc_id, m) for m in inputs.deps["coref"]["mentions"]]
    results = link_entities(mentions, inputs.text, res.kb, sentences=sentences)
    entities = []
    for r in results:
        entry = r.mention.to_json()
        entry["kb_id"] = r.kb_id
        entry["linking_score"] = r.score
        entities.append(entry)
    return {"entities": entities}


def run_sentiment(inputs: ToolInputs, res: AnalyzerResources) -> dict:
    return sentiment(inputs.text, res.lexicon).to_json()


NativeTool = Callable[[ToolInputs, AnalyzerResources], dict]

NATIVE_TOOLS: dict[str, NativeTool] = {
    "segment": run_segment,
    "ner": run_ner,
    "coref": run_coref,
    "entity_linking": run_entity_linking,
    "sentiment": run_sentiment,
}


def bind_native_tools(res: AnalyzerResources) -> dict[str, Callable[[ToolInputs], dict]]:
    """Close each native tool over the loaded resources."""
    return {
        tool_id: (lambda inputs, fn=fn: fn(inputs, res)) for tool_id, fn in NATIVE_TOOLS.items()
    }
