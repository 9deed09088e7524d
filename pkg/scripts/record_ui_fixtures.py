#!/usr/bin/env python3
"""Record API responses into frontend/tests/fixtures/.

The UI contract tests replay these instead of talking to a live server,
which keeps them honest: every number the UI renders is traceable to a
real API payload.
"""

import json
import time
from pathlib import Path

from fastapi.testclient import TestClient

from quarry.api import ServiceConfig, Workbench, create_app

ROOT = Path(__file__).resolve().parents[1]
FIXTURE_CORPUS = ROOT / "src" / "quarry" / "assets" / "fixture_corpus.jsonl"
OUT = ROOT / "frontend" / "tests" / "fixtures"


def wait_done(client, job_id):
    for _ in range(600):
        status = client.get(f"/jobs/{job_id}").json()
        if status["state"] in ("done", "partial_failure", "failed"):
            return status
        time.sleep(0.02)
    raise RuntimeError(f"job {job_id} never finished")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    bench = Workbench(ServiceConfig())
    bench.start()
    try:
        with TestClient(create_app(bench)) as client:
            assert client.post("/documents", content=FIXTURE_CORPUS.read_bytes()).json()["accepted"] == 12

            batch = client.post(
                "/jobs/batch", json={"query": "", "tools": ["entity_linking", "sentiment"]}
            ).json()
            wait_done(client, batch["job_id"])

            dump("tools.json", client.get("/tools").json())
            dump("document.json", client.get("/documents/news-apple-1").json())
            dump("results.json", client.get("/documents/news-apple-1/results").json())
            dump("stats.json", client.get(
                "/stats", params={"q": "", "field": "sentiment.score", "width": 0.5}
            ).json())
            dump("graph.json", client.get("/graph", params={"q": "source:social"}).json())
            dump("search.json", client.get(
                "/search", params={"q": "topic:tech", "limit": 10, "include_docs": True}
            ).json())
            dump("syntax_error.json", client.get("/search", params={"q": "a AND (b OR"}).json())
            dump("job_status.json", client.get(f"/jobs/{batch['job_id']}").json())

            # a fresh interactive run (force) so the stream carries real transitions
            events = []
            with client.stream(
                "POST", "/jobs/interactive",
                json={"doc_id": "news-apple-1", "tools": ["sentiment"], "force": True},
            ) as resp:
                for line in resp.iter_lines():
                    if line.startswith("data: "):
                        events.append(json.loads(line[len("data: "):]))
            dump("interactive_events.json", events)

            # second run hits the cache: the instant-report path
            cached_events = []
            with client.stream(
                "POST", "/jobs/interactive",
                json={"doc_id": "news-apple-1", "tools": ["sentiment"]},
            ) as resp:
                for line in resp.iter_lines():
                    if line.startswith("data: "):
                        cached_events.append(json.loads(line[len("data: "):]))
            dump("interactive_cached_events.json", cached_events)
    finally:
        bench.stop()
    print(f"fixtures written to {OUT}")


def dump(name: str, payload) -> None:
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"  {name}")


if __name__ == "__main__":
    main()
