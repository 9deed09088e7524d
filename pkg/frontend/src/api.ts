// Thin typed client for the REST API, including the SSE job stream.

import type {
  AnalysisRecord,
  ApiErrorBody,
  BatchAccepted,
  DocumentPayload,
  GraphPayload,
  JobStatus,
  SearchPayload,
  StatsPayload,
  StreamEvent,
  ToolSpec,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

/**
 * Incremental parser for the server's event stream ("data: {json}\n\n"
 * frames, ": keepalive" comments). Returns completed events plus the
 * unconsumed tail to prepend to the next chunk.
 */
export function parseSseChunk(buffer: string): { events: StreamEvent[]; rest: string } {
  const events: StreamEvent[] = [];
  const parts = buffer.split("\n\n");
  const rest = parts.pop() ?? "";
  for (const part of parts) {
    for (const line of part.split("\n")) {
      if (line.startsWith("data: ")) {
        events.push(JSON.parse(line.slice("data: ".length)) as StreamEvent);
      }
    }
  }
  return { events, rest };
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, body as ApiErrorBody);
    return body as T;
  }

  tools(): Promise<ToolSpec[]> {
    return this.json("/tools");
  }

  document(docId: string): Promise<DocumentPayload> {
    return this.json(`/documents/${encodeURIComponent(docId)}`);
  }

  results(docId: string): Promise<Record<string, AnalysisRecord>> {
    return this.json(`/documents/${encodeURIComponent(docId)}/results`);
  }

  search(query: string, limit = 20, includeDocs = true): Promise<SearchPayload> {
    const params = new URLSearchParams({
      q: query,
      limit: String(limit),
      include_docs: includeDocs ? "true" : "false",
    });
    return this.json(`/search?${params}`);
  }

  stats(query: string, field: string, width = 0.5, lo = -1, hi = 1): Promise<StatsPayload> {
    const params = new URLSearchParams({
      q: query,
      field,
      width: String(width),
      lo: String(lo),
      hi: String(hi),
    });
    return this.json(`/stats?${params}`);
  }

  graph(query: string): Promise<GraphPayload> {
    return this.json(`/graph?${new URLSearchParams({ q: query })}`);
  }

  submitBatch(query: string, tools: string[], force = false): Promise<BatchAccepted> {
    return this.json("/jobs/batch", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ query, tools, force }),
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.json(`/jobs/${encodeURIComponent(jobId)}`);
  }

  /**
   * Submit an interactive run and deliver each streamed event to the
   * callback as it arrives; resolves with the final job state.
   */
  async streamInteractive(
    docId: string,
    tools: string[],
    force: boolean,
    onEvent: (event: StreamEvent) => void,
  ): Promise<string> {
    const resp = await fetch(this.base + "/jobs/interactive", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ doc_id: docId, tools, force }),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, (await resp.json()) as ApiErrorBody);
    }
    if (!resp.body) throw new Error("response has no body stream");
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    let finalState = "failed";
    for (;;) {
      const { value, done } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const { events, rest } = parseSseChunk(buffer);
      buffer = rest;
      for (const event of events) {
        onEvent(event);
        if (
          (event.event === "job" || event.event === "job_accepted") &&
          ["done", "partial_failure", "failed"].includes(event.state)
        ) {
          finalState = event.state;
        }
      }
    }
    return finalState;
  }
}
