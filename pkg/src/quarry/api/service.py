"""Service assembly: store + registry + broker + workers behind one object.

The REST handlers, the CLI's local mode, and the tests all build on this
so they share identical behavior.
"""

from __future__ import annotations

import json
import math
from datetime import datetime
from typing import Iterable, Optional

from ..analyzers import AnalyzerResources, bind_native_tools, build_social_graph, pagerank
from ..docstore import DocStore, Document, parse_query
from ..errors import EmptyGraph, InvalidDocument, QuarryError
from ..pipeline import ToolRegistry, plan as build_plan
from ..taskqueue import Broker, NativeWorkerPool, Reaper, WorkerProtocolServer
from .config import ServiceConfig

from ..analyzers.tools import ToolInputs


class Workbench:
    """Everything the endpoints need, wired together from one config."""

    def __init__(self, config: ServiceConfig | None = None):
        self.config = config or ServiceConfig()
        self.store = DocStore(self.config.store_path())
        self.registry = ToolRegistry()
        self.registry.load_bootstrap(self.config.registry_path)
        for spec in self.registry.specs():
            if spec.output_projections:
                self.store.set_projections(spec.tool_id, spec.output_projections)
        self.resources = AnalyzerResources.load(
            self.config.gazetteer_path, self.config.lexicon_path, self.config.kb_path
        )
        self.broker = Broker(
            self.store,
            self.registry,
            lease_ttl=self.config.lease_ttl,
            max_attempts=self.config.max_attempts,
        )
        native = bind_native_tools(self.resources)
        registered_native = {
            spec.tool_id: native[spec.tool_id]
            for spec in self.registry.specs()
            if spec.exec_class == "native" and spec.tool_id in native
        }
        self.worker_pool = NativeWorkerPool(
            self.broker, registered_native, workers=self.config.native_workers
        )
        self.reaper = Reaper(self.broker, interval=max(0.2, min(1.0, self.config.lease_ttl / 10)))
        self.worker_server: Optional[WorkerProtocolServer] = None
        if self.config.worker_port >= 0:
            self.worker_server = WorkerProtocolServer(
                self.broker, host=self.config.listen_host, port=self.config.worker_port
            )

    def start(self) -> None:
        self.worker_pool.start()
        self.reaper.start()
        if self.worker_server is not None:
            self.worker_server.start()

    def stop(self) -> None:
        if self.worker_server is not None:
            self.worker_server.stop()
        self.reaper.stop()
        self.worker_pool.stop()
        self.store.close()

    # ------------------------------------------------------------- ingest

    def ingest_lines(self, body: str) -> dict:
        """Parse and store JSON-lines documents; per-line validation."""
        accepted = 0
        rejected: list[dict] = []
        for lineno, line in enumerate(body.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                self.store.put_document(parse_document_line(line))
                accepted += 1
            except (InvalidDocument, ValueError) as exc:
                rejected.append({"line": lineno, "error": str(exc)})
        return {"accepted": accepted, "rejected": rejected}

    # -------------------------------------------------------------- stats

    def stats(self, query: str, field: str, width: float, lo: float, hi: float) -> dict:
        """Histogram of a numeric field over the documents matching a query.

        Buckets are right-closed, the lowest includes ``lo``, and values
        outside [lo, hi] are dropped.
        """
        if width <= 0:
            raise ValueError("width must be positive")
        if hi <= lo:
            raise ValueError("hi must exceed lo")
        if field == "text":
            raise ValueError("field 'text' is not numeric")
        ast = parse_query(query)
        ids = self.store.search_all(ast)
        n_buckets = max(1, math.ceil((hi - lo) / width - 1e-9))
        edges = [min(lo + i * width, hi) for i in range(n_buckets + 1)]
        edges[-1] = hi
        counts = [0] * n_buckets
        for doc_id in ids:
            for value in self.store.field_values(field, doc_id):
                if isinstance(value, bool):
                    raise ValueError(f"field {field!r} is not numeric")
                if not isinstance(value, (int, float)):
                    raise ValueError(f"field {field!r} is not numeric")
                v = float(value)
                if v < lo or v > hi:
                    continue
                if v == lo:
                    counts[0] += 1
                    continue
                for i in range(n_buckets):
                    if edges[i] < v <= edges[i + 1]:
                        counts[i] += 1
                        break
        return {"field": field, "width": width, "lo": lo, "hi": hi, "edges": edges, "buckets": counts}

    # -------------------------------------------------------------- graph

    def graph(self, query: str) -> dict:
        """Social graph plus PageRank over the posts matching a query.

        Documents without an author field are skipped: corpus-level graphs
        must tolerate mixed corpora.
        """
        ast = parse_query(query)
        posts = []
        for doc_id in self.store.search_all(ast):
            doc = self.store.get_document(doc_id)
            author = doc.fields.get("author")
            if isinstance(author, str) and author:
                posts.append(doc)
        graph = build_social_graph(posts)
        try:
            scores = pagerank(graph)
        except EmptyGraph:
            scores = {}
        payload = graph.to_json()
        payload["scores"] = {node: scores.get(node, 0.0) for node in sorted(graph.nodes)}
        payload["nodes"] = [
            {"id": node, "score": scores.get(node, 0.0)} for node in sorted(graph.nodes)
        ]
        return payload


def parse_document_line(line: str) -> Document:
    """One JSONL record -> Document; raises on malformed input."""
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"bad JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidDocument("document line must be a JSON object")
    created_at = None
    if data.get("created_at"):
        created_at = datetime.fromisoformat(data["created_at"])
    return Document(
        id=data.get("id", ""),
        text=data.get("text", ""),
        source=data.get("source", "imported"),
        fields=data.get("fields", {}) or {},
        created_at=created_at,
    )


def run_local(
    tool_id: str,
    text: str,
    config: ServiceConfig | None = None,
    fields: dict | None = None,
) -> dict:
    """Run one native tool (and its prerequisites) in-process, no server.

    Uses the same registry and planner as the service, so local output
    matches what a job would store.
    """
    config = config or ServiceConfig()
    registry = ToolRegistry()
    registry.load_bootstrap(config.registry_path)
    spec = registry.require(tool_id)
    if spec.exec_class != "native":
        raise QuarryError(f"tool {tool_id!r} is not native; run it through the server")
    resources = AnalyzerResources.load(config.gazetteer_path, config.lexicon_path, config.kb_path)
    tools = bind_native_tools(resources)

    graph = registry.resolve({tool_id})
    outputs: dict[str, dict] = {}
    for chain in build_plan(graph).chains:
        for step in chain:
            deps = {dep: outputs[dep] for dep in registry.require(step).depends_on}
            inputs = ToolInputs(doc_id="local", text=text, fields=fields or {}, deps=deps)
            outputs[step] = tools[step](inputs)
    return outputs[tool_id]
