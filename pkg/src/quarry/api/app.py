"""REST surface.

Endpoints:
    POST /documents               JSONL ingest
    GET  /documents/{id}          fetch one document
    GET  /documents/{id}/results  latest analysis per tool
    GET  /search?q=&limit=&cursor=
    POST /jobs/interactive        SSE stream of task-state updates
    POST /jobs/batch              returns the job id immediately
    GET  /jobs/{id}               job snapshot
    GET  /stats?q=&field=&width=&lo=&hi=
    GET  /graph?q=
    GET  /tools

Every non-2xx body is exactly one ApiError: {code, message, detail?}.
"""

from __future__ import annotations

import json
import os
import queue as queue_mod
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..errors import (
    CycleIntroduced,
    InvalidDocument,
    InvalidRecord,
    MissingDependency,
    NotFound,
    QuarryError,
    QuerySyntaxError,
)
from ..docstore import parse_query
from .service import Workbench

#: task states as shown to clients; a leased task is "running"
_STATE_VIEW = {
    "queued": "queued",
    "leased": "running",
    "ok": "ok",
    "error": "error",
    "retry_wait": "retrying",
    "cancelled": "cancelled",
}


class InteractiveJobRequest(BaseModel):
    doc_id: str
    tools: list[str]
    force: bool = False


class BatchJobRequest(BaseModel):
    query: str = ""
    tools: list[str]
    force: bool = False


def _api_error(status: int, code: str, message: str, detail=None) -> JSONResponse:
    body = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=status, content=body)


def create_app(wb: Workbench) -> FastAPI:
    app = FastAPI(title="quarry", version="0.1.0", docs_url=None, redoc_url=None)

    @app.exception_handler(QuarryError)
    async def quarry_error_handler(_req: Request, exc: QuarryError):
        if isinstance(exc, NotFound):
            return _api_error(404, "not_found", str(exc))
        if isinstance(exc, QuerySyntaxError):
            return _api_error(
                400, "bad_request", str(exc), detail={"offset": exc.offset, "expected": exc.expected}
            )
        if isinstance(exc, (InvalidDocument, InvalidRecord, MissingDependency)):
            return _api_error(400, "bad_request", str(exc))
        if isinstance(exc, CycleIntroduced):
            return _api_error(409, "conflict", str(exc))
        return _api_error(500, "internal", str(exc))

    @app.exception_handler(ValueError)
    async def value_error_handler(_req: Request, exc: ValueError):
        return _api_error(400, "bad_request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_req: Request, exc: RequestValidationError):
        return _api_error(400, "bad_request", "invalid request body", detail=exc.errors())

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(_req: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "bad_request"
        return _api_error(exc.status_code, code, str(exc.detail))

    # -------------------------------------------------------- documents

    @app.post("/documents")
    async def ingest(request: Request):
        raw = await request.body()
        try:
            body = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            return _api_error(400, "bad_request", f"body is not UTF-8: {exc}")
        return wb.ingest_lines(body)

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        return wb.store.get_document(doc_id).to_json()

    @app.get("/documents/{doc_id}/results")
    def get_results(doc_id: str):
        wb.store.get_document(doc_id)  # 404 for unknown ids
        return {tool: rec.to_json() for tool, rec in sorted(wb.store.latest_analyses(doc_id).items())}

    @app.get("/search")
    def search(q: str = "", limit: int = 10, cursor: Optional[str] = None, include_docs: bool = False):
        if not 1 <= limit <= 1000:
            raise ValueError("limit must be in 1..1000")
        ast = parse_query(q)
        ids, next_cursor = wb.store.search(ast, limit=limit, cursor=cursor)
        payload = {"ids": ids, "next_cursor": next_cursor}
        if include_docs:
            payload["docs"] = [wb.store.get_document(i).to_json() for i in ids]
        return payload

    # ------------------------------------------------------------- jobs

    @app.post("/jobs/interactive")
    def submit_interactive(req: InteractiveJobRequest):
        wb.store.get_document(req.doc_id)
        _check_tools(req.tools)
        job_id = wb.broker.submit("interactive", [req.doc_id], req.tools, force=req.force)
        return StreamingResponse(_job_stream(job_id), media_type="text/event-stream")

    def _check_tools(tools: list[str]) -> None:
        if not tools:
            raise MissingDependency("no tools requested")
        for tool in tools:
            wb.registry.require(tool)

    def _job_stream(job_id: str):
        status = wb.broker.job_status(job_id)
        # the subscription replays the full event log, so nothing emitted
        # between submit and this point is lost
        sub = wb.broker.subscribe(job_id)
        try:
            yield _sse({"event": "job_accepted", "job_id": job_id, "state": status["state"]})
            # tools served from cache report instantly, stored output included
            for doc_id, tools in sorted(status["cached"].items()):
                records = wb.store.latest_analyses(doc_id)
                for tool in tools:
                    rec = records.get(tool)
                    yield _sse(
                        {
                            "event": "cached",
                            "doc_id": doc_id,
                            "tool_id": tool,
                            "record": rec.to_json() if rec else None,
                        }
                    )
            while True:
                try:
                    event = sub.get(timeout=30.0)
                except queue_mod.Empty:
                    yield ": keepalive\n\n"
                    continue
                yield _sse(_map_event(event))
                if event.get("event") == "job" and event.get("state") in (
                    "done", "partial_failure", "failed",
                ):
                    return
        finally:
            wb.broker.unsubscribe(job_id, sub)

    def _map_event(event: dict) -> dict:
        out = dict(event)
        if out.get("event") == "task":
            out["state"] = _STATE_VIEW.get(out["state"], out["state"])
        return out

    @app.post("/jobs/batch")
    def submit_batch(req: BatchJobRequest):
        _check_tools(req.tools)
        ast = parse_query(req.query)
        doc_ids = wb.store.search_all(ast)
        job_id = wb.broker.submit("batch", doc_ids, req.tools, force=req.force)
        status = wb.broker.job_status(job_id)
        return {"job_id": job_id, "doc_count": len(doc_ids), "task_count": status["task_count"]}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        status = wb.broker.job_status(job_id)
        for task in status["tasks"]:
            task["state"] = _STATE_VIEW.get(task["state"], task["state"])
        return status

    # ------------------------------------------------------------ corpus

    @app.get("/stats")
    def stats(q: str = "", field: str = "sentiment.score", width: float = 0.5,
              lo: float = -1.0, hi: float = 1.0):
        return wb.stats(q, field, width, lo, hi)

    @app.get("/graph")
    def graph(q: str = ""):
        return wb.graph(q)

    @app.get("/tools")
    def tools():
        return [spec.to_json() for spec in wb.registry.specs()]

    ui_dir = wb.config.ui_dir
    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _sse(payload: dict) -> str:
    return f"data: {json.dumps(payload)}\n\n"
