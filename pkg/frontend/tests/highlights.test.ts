// Highlight rendering uses server offsets verbatim and never re-tokenizes.

import { describe, expect, it } from "vitest";

import { chainColor, segmentText } from "../src/highlights.js";
import type { AnalysisRecord, DocumentPayload, Mention } from "../src/types.js";
import { fixture } from "./helpers.js";

const doc = fixture<DocumentPayload>("document.json");
const results = fixture<Record<string, AnalysisRecord>>("results.json");

function corefMentions(): Mention[] {
  const output = results["coref"].output as { mentions: Mention[] };
  return output.mentions;
}

describe("highlight segmentation", () => {
  it("segments concatenate back to the exact document text", () => {
    const segments = segmentText(doc.text, corefMentions());
    expect(segments.map((s) => s.text).join("")).toBe(doc.text);
  });

  it("each highlighted segment slices the text at the server offsets", () => {
    for (const segment of segmentText(doc.text, corefMentions())) {
      if (segment.mention) {
        expect(segment.text).toBe(doc.text.slice(segment.mention.start, segment.mention.end));
        expect(segment.text).toBe(segment.mention.surface);
      }
    }
  });

  it("mentions in the same chain share a color, distinct chains differ", () => {
    expect(chainColor(0)).toBe(chainColor(0));
    expect(chainColor(0)).not.toBe(chainColor(1));
    expect(chainColor(undefined)).toBeTruthy();
  });

  it("out-of-range spans are dropped rather than corrupting the text", () => {
    const bogus: Mention[] = [{ start: -3, end: 2, surface: "x", etype: "PER" },
                              { start: 0, end: doc.text.length + 5, surface: "y", etype: "PER" }];
    const segments = segmentText(doc.text, bogus);
    expect(segments.map((s) => s.text).join("")).toBe(doc.text);
    expect(segments.every((s) => s.mention === null)).toBe(true);
  });
});
