// Histogram view-model: bars are the server's buckets, verbatim.

import type { StatsPayload } from "./types.js";

export interface Bar {
  lo: number;
  hi: number;
  count: number;
  /** height relative to the tallest bar, in [0, 1] */
  frac: number;
}

export function histogramBars(stats: StatsPayload): Bar[] {
  const peak = Math.max(0, ...stats.buckets);
  return stats.buckets.map((count, i) => ({
    lo: stats.edges[i],
    hi: stats.edges[i + 1],
    count,
    frac: peak > 0 ? count / peak : 0,
  }));
}

export function totalCount(stats: StatsPayload): number {
  return stats.buckets.reduce((a, b) => a + b, 0);
}
