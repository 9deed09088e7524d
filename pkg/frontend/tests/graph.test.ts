// Graph view contract: node sizes monotone in PageRank, deterministic layout.

import { describe, expect, it } from "vitest";

import { layoutGraph, nodeRadius } from "../src/graphview.js";
import type { GraphPayload } from "../src/types.js";
import { fixture } from "./helpers.js";

const graph = fixture<GraphPayload>("graph.json");

describe("graph view", () => {
  it("node radius is monotone in the PageRank score", () => {
    const sorted = [...graph.nodes].sort((a, b) => a.score - b.score);
    const maxScore = Math.max(...graph.nodes.map((n) => n.score));
    for (let i = 1; i < sorted.length; i++) {
      const prev = nodeRadius(sorted[i - 1].score, maxScore);
      const cur = nodeRadius(sorted[i].score, maxScore);
      expect(cur).toBeGreaterThanOrEqual(prev);
      if (sorted[i].score > sorted[i - 1].score) {
        expect(cur).toBeGreaterThan(prev);
      }
    }
  });

  it("layout positions every node inside the viewport", () => {
    const layout = layoutGraph(graph, 640, 480);
    expect(layout.nodes.length).toBe(graph.nodes.length);
    for (const node of layout.nodes) {
      expect(node.x).toBeGreaterThanOrEqual(0);
      expect(node.x).toBeLessThanOrEqual(640);
      expect(node.y).toBeGreaterThanOrEqual(0);
      expect(node.y).toBeLessThanOrEqual(480);
    }
  });

  it("layout is deterministic", () => {
    const a = layoutGraph(graph, 640, 480);
    const b = layoutGraph(graph, 640, 480);
    expect(a).toEqual(b);
  });

  it("scores pass through untouched from the API payload", () => {
    const layout = layoutGraph(graph, 640, 480);
    for (const node of layout.nodes) {
      expect(node.score).toBe(graph.scores[node.id]);
    }
  });

  it("fixture sanity: scores sum to one", () => {
    const sum = graph.nodes.reduce((acc, n) => acc + n.score, 0);
    expect(sum).toBeCloseTo(1.0, 6);
  });
});
