// Batch console: progress math and syntax-error underlining.

import { describe, expect, it } from "vitest";

import { byteOffsetToCharIndex, progressOf, queryErrorView } from "../src/batch.js";
import type { ApiErrorBody, JobStatus } from "../src/types.js";
import { fixture } from "./helpers.js";

const jobStatus = fixture<JobStatus>("job_status.json");
const syntaxError = fixture<ApiErrorBody>("syntax_error.json");

describe("batch progress", () => {
  it("terminal job shows full progress", () => {
    const p = progressOf(jobStatus);
    expect(p.total).toBe(jobStatus.task_count);
    expect(p.done).toBe(jobStatus.task_count);
    expect(p.frac).toBe(1);
  });

  it("zero-task job counts as complete", () => {
    const p = progressOf({ ...jobStatus, task_count: 0, counts: {}, tasks: [] });
    expect(p.frac).toBe(1);
  });

  it("partial counts produce a fraction", () => {
    const p = progressOf({ ...jobStatus, task_count: 10, counts: { ok: 3, queued: 7 } });
    expect(p.done).toBe(3);
    expect(p.frac).toBeCloseTo(0.3, 12);
  });
});

describe("query error underlining", () => {
  it("uses the server-reported offset on the recorded fixture", () => {
    const query = "a AND (b OR";
    const view = queryErrorView(query, syntaxError)!;
    expect(view).not.toBeNull();
    expect(view.caretIndex).toBe(11); // ascii: byte offset == char index
    expect(view.before).toBe(query);
    expect(view.after).toBe("");
  });

  it("converts byte offsets to char indexes across multibyte text", () => {
    const query = "café AND (";
    // byte offset of '(' is 10: c-a-f-é(2 bytes)-space-A-N-D-space
    expect(byteOffsetToCharIndex(query, 10)).toBe(9);
    expect(query[9]).toBe("(");
  });

  it("clamps offsets past the end", () => {
    expect(byteOffsetToCharIndex("ab", 99)).toBe(2);
  });

  it("returns null when the error carries no offset", () => {
    expect(queryErrorView("x", { code: "bad_request", message: "nope" })).toBeNull();
  });
});
