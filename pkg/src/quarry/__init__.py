"""quarry: a self-hosted text-mining workbench.

Corpus storage with a boolean field-query language, dependency-aware
analysis pipelines with result memoization, a two-priority task queue with
pull-based workers, baseline analyzers (NER, coreference, entity linking,
sentiment, social-graph centrality), a REST API, and a CLI.
"""

__version__ = "0.1.0"
