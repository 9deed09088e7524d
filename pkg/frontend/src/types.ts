// API payload shapes, mirrored from the service's JSON responses.

export interface ToolSpec {
  tool_id: string;
  version: string;
  depends_on: string[];
  exec_class: "native" | "external";
  output_projections: string[];
}

export interface AnalysisRecord {
  doc_id: string;
  tool_id: string;
  tool_version: string;
  status: "ok" | "error";
  output: unknown;
  error_message: string | null;
  produced_at: string | null;
}

export interface DocumentPayload {
  id: string;
  source: string;
  text: string;
  fields: Record<string, string | number | boolean>;
  created_at: string | null;
}

export interface SearchPayload {
  ids: string[];
  next_cursor: string | null;
  docs?: DocumentPayload[];
}

export interface StatsPayload {
  field: string;
  width: number;
  lo: number;
  hi: number;
  edges: number[];
  buckets: number[];
}

export interface GraphNode {
  id: string;
  score: number;
}

export interface GraphEdge {
  src: string;
  dst: string;
  kind: string;
  weight: number;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: GraphEdge[];
  scores: Record<string, number>;
}

export interface TaskView {
  task_id: string;
  doc_id: string;
  tool_id: string;
  state: string;
  attempt: number;
}

export interface JobStatus {
  job_id: string;
  kind: string;
  state: string;
  task_count: number;
  counts: Record<string, number>;
  tasks: TaskView[];
  cached: Record<string, string[]>;
}

export interface BatchAccepted {
  job_id: string;
  doc_count: number;
  task_count: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: { offset?: number; expected?: string[] } & Record<string, unknown>;
}

export type StreamEvent =
  | { event: "job_accepted"; job_id: string; state: string }
  | { event: "job"; job_id: string; state: string; ts?: string }
  | { event: "cached"; doc_id: string; tool_id: string; record: AnalysisRecord | null }
  | {
      event: "task";
      task_id: string;
      doc_id: string;
      tool_id: string;
      state: string;
      output?: unknown;
      error?: string;
      ts?: string;
    };

export interface Mention {
  start: number;
  end: number;
  surface: string;
  etype: string;
  chain_id?: number;
  gender?: string;
  kb_id?: string | null;
  linking_score?: number;
}

export const TERMINAL_JOB_STATES = ["done", "partial_failure", "failed"] as const;

export function isTerminalJobState(state: string): boolean {
  return (TERMINAL_JOB_STATES as readonly string[]).includes(state);
}
