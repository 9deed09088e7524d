// Batch-console view-model: progress math and query-error positioning.

import type { ApiErrorBody, JobStatus } from "./types.js";

export interface Progress {
  done: number;
  total: number;
  frac: number;
}

const TERMINAL_TASK_STATES = ["ok", "error", "cancelled"];

export function progressOf(status: JobStatus): Progress {
  const done = TERMINAL_TASK_STATES.reduce((sum, s) => sum + (status.counts[s] ?? 0), 0);
  const total = status.task_count;
  return { done, total, frac: total > 0 ? done / total : 1 };
}

/**
 * The server reports query syntax errors as byte offsets into the UTF-8
 * encoding; translate one back to a character index for underlining.
 */
export function byteOffsetToCharIndex(query: string, byteOffset: number): number {
  const encoder = new TextEncoder();
  let bytes = 0;
  for (let i = 0; i < query.length; i++) {
    if (bytes >= byteOffset) return i;
    // measure by code point so surrogate pairs count once
    const cp = query.codePointAt(i)!;
    const ch = String.fromCodePoint(cp);
    bytes += encoder.encode(ch).length;
    if (cp > 0xffff) i++; // skip the low surrogate
  }
  return query.length;
}

export interface QueryErrorView {
  before: string;
  after: string;
  caretIndex: number;
  message: string;
}

export function queryErrorView(query: string, error: ApiErrorBody): QueryErrorView | null {
  const offset = error.detail?.offset;
  if (typeof offset !== "number") return null;
  const caretIndex = byteOffsetToCharIndex(query, offset);
  return {
    before: query.slice(0, caretIndex),
    after: query.slice(caretIndex),
    caretIndex,
    message: error.message,
  };
}
