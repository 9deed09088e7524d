// Per-tool panel state for the document view.
//
// The UI never computes analysis results; panels only reflect stored
// records and the server's streamed task events, so a page refresh
// rebuilds the identical state from GET /documents/{id}/results.

import type { AnalysisRecord, StreamEvent, ToolSpec } from "./types.js";

export type PanelStatus = "idle" | "queued" | "running" | "ok" | "error";

export interface PanelState {
  toolId: string;
  status: PanelStatus;
  payload: unknown;
  error: string | null;
  fromCache: boolean;
}

const EVENT_STATUS: Record<string, PanelStatus> = {
  queued: "queued",
  running: "running",
  retrying: "running",
  ok: "ok",
  error: "error",
  cancelled: "error",
};

/** One panel per registered tool; stored results render immediately. */
export function buildPanels(
  tools: ToolSpec[],
  results: Record<string, AnalysisRecord>,
): PanelState[] {
  return [...tools]
    .sort((a, b) => a.tool_id.localeCompare(b.tool_id))
    .map((tool) => {
      const record = results[tool.tool_id];
      if (!record) {
        return { toolId: tool.tool_id, status: "idle" as const, payload: null, error: null, fromCache: false };
      }
      return {
        toolId: tool.tool_id,
        status: record.status === "ok" ? ("ok" as const) : ("error" as const),
        payload: record.output,
        error: record.error_message,
        fromCache: true,
      };
    });
}

/** Fold one streamed event into the panel list (pure; returns a new list). */
export function applyEvent(panels: PanelState[], event: StreamEvent): PanelState[] {
  if (event.event === "cached") {
    return panels.map((panel) =>
      panel.toolId === event.tool_id
        ? {
            ...panel,
            status: event.record?.status === "error" ? "error" : "ok",
            payload: event.record?.output ?? null,
            error: event.record?.error_message ?? null,
            fromCache: true,
          }
        : panel,
    );
  }
  if (event.event === "task") {
    const status = EVENT_STATUS[event.state];
    if (!status) return panels;
    return panels.map((panel) =>
      panel.toolId === event.tool_id
        ? {
            ...panel,
            status,
            payload: status === "ok" ? (event.output ?? panel.payload) : panel.payload,
            error: status === "error" ? (event.error ?? `task ${event.state}`) : null,
            fromCache: false,
          }
        : panel,
    );
  }
  return panels;
}

/** The terminal job state carried by an event, if it is one. */
export function terminalState(event: StreamEvent): string | null {
  if (event.event === "job" || event.event === "job_accepted") {
    if (["done", "partial_failure", "failed"].includes(event.state)) return event.state;
  }
  return null;
}

/** Chronological status list one panel went through, for tests and debugging. */
export function statusTrace(events: StreamEvent[], toolId: string): PanelStatus[] {
  const trace: PanelStatus[] = [];
  for (const event of events) {
    if (event.event === "task" && event.tool_id === toolId) {
      const status = EVENT_STATUS[event.state];
      if (status) trace.push(status);
    }
    if (event.event === "cached" && event.tool_id === toolId) trace.push("ok");
  }
  return trace;
}
