"""Native baseline analyzers: segmentation, NER, coreference, entity
linking, sentiment, and social-graph centrality."""

from .coref import coref
from .linking import LinkResult, cosine, embed, link_entities, trigram_jaccard
from .ner import detect_pronouns, ner
from .resources import Gazetteer, load_gazetteer, load_kb, load_lexicon
from .segment import segment, sentence_of
from .sentiment import sentiment
from .socialgraph import build_social_graph, pagerank
from .tools import (
    DEFAULT_TOOL_SPECS,
    NATIVE_TOOLS,
    AnalyzerResources,
    ToolInputs,
    bind_native_tools,
)
from .types import KbEntity, Mention, SentimentResult, SocialGraph, sentiment_label

__all__ = [
    "AnalyzerResources",
    "DEFAULT_TOOL_SPECS",
    "Gazetteer",
    "KbEntity",
    "LinkResult",
    "Mention",
    "NATIVE_TOOLS",
    "SentimentResult",
    "SocialGraph",
    "ToolInputs",
    "bind_native_tools",
    "build_social_graph",
    "coref",
    "cosine",
    "detect_pronouns",
    "embed",
    "link_entities",
    "load_gazetteer",
    "load_kb",
    "load_lexicon",
    "ner",
    "pagerank",
    "segment",
    "sentence_of",
    "sentiment",
    "sentiment_label",
    "trigram_jaccard",
]
