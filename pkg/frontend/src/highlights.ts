// In-text mention highlighting.
//
// The server's character offsets are used verbatim; re-tokenizing here
// would drift from what the analyzers actually saw.

import type { Mention } from "./types.js";

export interface Segment {
  text: string;
  mention: Mention | null;
}

/** Split text into plain and highlighted segments; concatenation restores the text. */
export function segmentText(text: string, mentions: Mention[]): Segment[] {
  const ordered = [...mentions]
    .filter((m) => m.start >= 0 && m.end <= text.length && m.start < m.end)
    .sort((a, b) => a.start - b.start || a.end - b.end);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const mention of ordered) {
    if (mention.start < cursor) continue; // overlapping span: keep the earlier one
    if (mention.start > cursor) {
      segments.push({ text: text.slice(cursor, mention.start), mention: null });
    }
    segments.push({ text: text.slice(mention.start, mention.end), mention });
    cursor = mention.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), mention: null });
  }
  return segments;
}

const PALETTE = [
  "#e6a157", "#7fb069", "#6aa3c8", "#c97fa7", "#9a8fd0",
  "#d0b45f", "#6ec6b3", "#d98a7e", "#8fb8de", "#b5a642",
];

/** Stable color per coreference chain. */
export function chainColor(chainId: number | undefined): string {
  if (chainId === undefined || chainId === null || chainId < 0) return "#cccccc";
  return PALETTE[chainId % PALETTE.length];
}
