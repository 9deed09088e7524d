"""Command-line client for the workbench, plus offline tool execution.

Exit codes are a stable scripting contract: 0 success, 1 job/partial
failure (or rejected ingest lines), 2 usage or configuration errors.
With ``--output json`` exactly one JSON document goes to stdout and all
diagnostics go to stderr.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

import click
import httpx

from .api.config import load_config
from .api.service import run_local
from .errors import MissingDependency, QuarryError

TERMINAL_STATES = ("done", "partial_failure", "failed")


@dataclass
class CliConfig:
    server_url: str
    output_format: str
    timeout: float

    def client(self) -> httpx.Client:
        parsed = urlparse(self.server_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise click.UsageError(f"bad server url {self.server_url!r}")
        return httpx.Client(base_url=self.server_url, timeout=self.timeout)


def diag(message: str) -> None:
    click.echo(message, err=True)


def emit(cfg: CliConfig, payload, table: str | None = None) -> None:
    if cfg.output_format == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(table if table is not None else json.dumps(payload, indent=2, sort_keys=True))


def check_response(resp: httpx.Response) -> dict:
    if resp.status_code >= 400:
        try:
            body = resp.json()
            message = f"{body.get('code', 'error')}: {body.get('message', '')}"
            if body.get("detail"):
                message += f" ({json.dumps(body['detail'])})"
        except ValueError:
            message = resp.text
        diag(f"server error ({resp.status_code}): {message}")
        raise SystemExit(2 if resp.status_code < 500 else 1)
    return resp.json()


@click.group()
@click.option("--server", envvar="QUARRY_SERVER", default="http://127.0.0.1:8901",
              show_default=True, help="Base URL of the workbench service.")
@click.option("--output", type=click.Choice(["json", "table"]), default="table", show_default=True)
@click.option("--timeout", type=float, default=30.0, show_default=True,
              help="HTTP timeout in seconds.")
@click.pass_context
def main(ctx: click.Context, server: str, output: str, timeout: float) -> None:
    """Text-mining workbench client."""
    ctx.obj = CliConfig(server_url=server, output_format=output, timeout=timeout)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_obj
def serve(cfg: CliConfig, config_path: str | None) -> None:
    """Run the workbench service (REST API plus workers)."""
    import uvicorn

    from .api import Workbench, create_app

    service_config = load_config(config_path)
    bench = Workbench(service_config)
    bench.start()
    if bench.worker_server is not None:
        diag(f"worker protocol on {bench.worker_server.host}:{bench.worker_server.port}")
    app = create_app(bench)
    try:
        uvicorn.run(app, host=service_config.listen_host, port=service_config.listen_port,
                    log_level="info")
    finally:
        bench.stop()


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def ingest(cfg: CliConfig, path: str) -> None:
    """Stream a JSON-lines corpus file into the service."""
    body = Path(path).read_bytes()
    with cfg.client() as client:
        data = check_response(client.post("/documents", content=body))
    lines = [f"accepted: {data['accepted']}", f"rejected: {len(data['rejected'])}"]
    for reject in data["rejected"]:
        lines.append(f"  line {reject['line']}: {reject['error']}")
    emit(cfg, data, table="\n".join(lines))
    if data["rejected"]:
        raise SystemExit(1)


@main.command()
@click.argument("doc_id")
@click.argument("tools", nargs=-1, required=True)
@click.option("--force", is_flag=True, help="Re-run even when results are cached.")
@click.pass_obj
def run(cfg: CliConfig, doc_id: str, tools: tuple[str, ...], force: bool) -> None:
    """Run tools on one document interactively and print each result."""
    events: list[dict] = []
    final_state = "failed"
    with cfg.client() as client:
        with client.stream(
            "POST", "/jobs/interactive",
            json={"doc_id": doc_id, "tools": list(tools), "force": force},
        ) as resp:
            if resp.status_code >= 400:
                resp.read()
                check_response(resp)
            for line in resp.iter_lines():
                if not line.startswith("data: "):
                    continue
                event = json.loads(line[len("data: "):])
                events.append(event)
                if cfg.output_format == "table":
                    _print_event(event)
                if event.get("event") == "job" and event.get("state") in TERMINAL_STATES:
                    final_state = event["state"]
    if cfg.output_format == "json":
        results = {}
        for event in events:
            if event.get("event") == "cached" and event.get("record"):
                results[event["tool_id"]] = event["record"]["output"]
            elif event.get("event") == "task" and event.get("state") == "ok":
                results[event["tool_id"]] = event.get("output")
        emit(cfg, {"doc_id": doc_id, "state": final_state, "results": results, "events": events})
    raise SystemExit(0 if final_state == "done" else 1)


def _print_event(event: dict) -> None:
    kind = event.get("event")
    if kind == "cached":
        record = event.get("record") or {}
        click.echo(f"[cached] {event['tool_id']}: {json.dumps(record.get('output'))}")
    elif kind == "task":
        line = f"[{event['state']}] {event['tool_id']}"
        if event.get("state") == "ok":
            line += f": {json.dumps(event.get('output'))}"
        if event.get("state") == "error":
            line += f": {event.get('error', '')}"
        click.echo(line)
    elif kind == "job" and event.get("state") in TERMINAL_STATES:
        click.echo(f"job {event.get('job_id', '')}: {event['state']}")


@main.command()
@click.argument("query")
@click.argument("tools", nargs=-1, required=True)
@click.option("--force", is_flag=True)
@click.option("--poll", type=float, default=0.5, show_default=True, help="Status poll interval.")
@click.pass_obj
def batch(cfg: CliConfig, query: str, tools: tuple[str, ...], force: bool, poll: float) -> None:
    """Run tools over every document matching a query; waits for the job."""
    with cfg.client() as client:
        data = check_response(
            client.post("/jobs/batch", json={"query": query, "tools": list(tools), "force": force})
        )
        job_id = data["job_id"]
        diag(f"job {job_id}: {data['doc_count']} documents, {data['task_count']} tasks")
        try:
            while True:
                status = check_response(client.get(f"/jobs/{job_id}"))
                counts = status["counts"]
                done = sum(counts.get(s, 0) for s in ("ok", "error", "cancelled"))
                diag(f"progress: {done}/{status['task_count']} tasks, state={status['state']}")
                if status["state"] in TERMINAL_STATES:
                    break
                time.sleep(poll)
        except KeyboardInterrupt:
            diag(f"interrupted; job {job_id} keeps running server-side "
                 f"(check it with: quarry status {job_id})")
            raise SystemExit(130) from None
    emit(cfg, status, table=f"job {job_id}: {status['state']}")
    raise SystemExit(0 if status["state"] == "done" else 1)


@main.command()
@click.argument("job_id")
@click.pass_obj
def status(cfg: CliConfig, job_id: str) -> None:
    """Show a job snapshot."""
    with cfg.client() as client:
        data = check_response(client.get(f"/jobs/{job_id}"))
    lines = [f"job {data['job_id']} [{data['kind']}]: {data['state']}"]
    for task in data["tasks"]:
        lines.append(f"  {task['task_id']} {task['tool_id']} on {task['doc_id']}: {task['state']}")
    emit(cfg, data, table="\n".join(lines))


@main.command()
@click.argument("query")
@click.option("--limit", type=int, default=10, show_default=True)
@click.option("--cursor", default=None)
@click.pass_obj
def search(cfg: CliConfig, query: str, limit: int, cursor: str | None) -> None:
    """Query the corpus and print matching document ids."""
    params = {"q": query, "limit": limit}
    if cursor:
        params["cursor"] = cursor
    with cfg.client() as client:
        data = check_response(client.get("/search", params=params))
    table = "\n".join(data["ids"]) or "(no matches)"
    if data.get("next_cursor"):
        table += f"\nnext cursor: {data['next_cursor']}"
    emit(cfg, data, table=table)


@main.command()
@click.argument("query", default="")
@click.option("--field", default="sentiment.score", show_default=True)
@click.option("--width", type=float, default=0.5, show_default=True)
@click.option("--lo", type=float, default=-1.0, show_default=True)
@click.option("--hi", type=float, default=1.0, show_default=True)
@click.option("--report-dir", type=click.Path(file_okay=False), default=None,
              help="Write stats.csv and stats.png here.")
@click.pass_obj
def stats(cfg: CliConfig, query: str, field: str, width: float, lo: float, hi: float,
          report_dir: str | None) -> None:
    """Histogram of a numeric field over matching documents."""
    with cfg.client() as client:
        data = check_response(client.get(
            "/stats", params={"q": query, "field": field, "width": width, "lo": lo, "hi": hi}
        ))
    rows = []
    for i, count in enumerate(data["buckets"]):
        rows.append(f"({data['edges'][i]:+.3f}, {data['edges'][i+1]:+.3f}]  {count}")
    emit(cfg, data, table="\n".join(rows))
    if report_dir:
        from . import report

        out = Path(report_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "stats.csv", "w", encoding="utf-8", newline="") as fh:
            report.write_stats_csv(data, fh)
        report.render_histogram(data, out / "stats.png")
        diag(f"wrote {out / 'stats.csv'} and {out / 'stats.png'}")


@main.command()
@click.argument("query", default="")
@click.option("--report-dir", type=click.Path(file_okay=False), default=None,
              help="Write nodes.csv, edges.csv and graph.png here.")
@click.pass_obj
def graph(cfg: CliConfig, query: str, report_dir: str | None) -> None:
    """Social interaction graph with centrality scores over matching posts."""
    with cfg.client() as client:
        data = check_response(client.get("/graph", params={"q": query}))
    lines = [f"{n['id']}: {n['score']:.6f}" for n in data["nodes"]] or ["(empty graph)"]
    lines += [f"{e['src']} -> {e['dst']} [{e['kind']} x{e['weight']}]" for e in data["edges"]]
    emit(cfg, data, table="\n".join(lines))
    if report_dir:
        from . import report

        out = Path(report_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "nodes.csv", "w", encoding="utf-8", newline="") as nodes_fh, \
             open(out / "edges.csv", "w", encoding="utf-8", newline="") as edges_fh:
            report.write_graph_csv(data, nodes_fh, edges_fh)
        report.render_graph(data, out / "graph.png")
        diag(f"wrote nodes.csv, edges.csv and graph.png to {out}")


@main.command()
@click.argument("tool")
@click.argument("text", required=False)
@click.option("--file", "file_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Read the text from a file instead of the argument.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_obj
def local(cfg: CliConfig, tool: str, text: str | None, file_path: str | None,
          config_path: str | None) -> None:
    """Run a native tool in-process (no server); dependencies run automatically."""
    if text is None and file_path is None:
        raise click.UsageError("provide TEXT or --file")
    if file_path is not None:
        text = Path(file_path).read_text(encoding="utf-8")
    try:
        output = run_local(tool, text or "", load_config(config_path))
    except MissingDependency as exc:
        raise click.UsageError(str(exc)) from exc
    except QuarryError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(json.dumps(output, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
