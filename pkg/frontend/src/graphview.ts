// Force-directed layout for the social-graph view.
//
// Deterministic: nodes start on a circle and the simulation runs a fixed
// number of steps with no randomness, so the same payload always renders
// the same picture. Node radius grows monotonically with PageRank score.

import type { GraphPayload } from "./types.js";

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  radius: number;
  score: number;
}

export interface LayoutEdge {
  src: string;
  dst: string;
  kind: string;
  weight: number;
}

export interface Layout {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  width: number;
  height: number;
}

const MIN_RADIUS = 10;
const MAX_RADIUS = 30;

/** Monotone score -> radius mapping (area roughly tracks score). */
export function nodeRadius(score: number, maxScore: number): number {
  if (maxScore <= 0) return MIN_RADIUS;
  const t = Math.sqrt(Math.max(0, score) / maxScore);
  return MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * t;
}

export function layoutGraph(
  graph: GraphPayload,
  width = 640,
  height = 480,
  iterations = 150,
): Layout {
  const n = graph.nodes.length;
  const cx = width / 2;
  const cy = height / 2;
  const maxScore = Math.max(0, ...graph.nodes.map((node) => node.score));
  const positions = new Map<string, { x: number; y: number }>();
  graph.nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, n);
    const r = Math.min(width, height) / 3;
    positions.set(node.id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
  });

  const springLength = Math.min(width, height) / 3;
  const repulsion = springLength * springLength * 0.6;
  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, { x: number; y: number }>();
    for (const node of graph.nodes) force.set(node.id, { x: 0, y: 0 });

    // pairwise repulsion
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const a = graph.nodes[i].id;
        const b = graph.nodes[j].id;
        const pa = positions.get(a)!;
        const pb = positions.get(b)!;
        let dx = pa.x - pb.x;
        let dy = pb.y === pa.y && pb.x === pa.x ? 0.01 : pa.y - pb.y;
        const dist2 = Math.max(1, dx * dx + dy * dy);
        const push = repulsion / dist2;
        const dist = Math.sqrt(dist2);
        dx /= dist;
        dy /= dist;
        force.get(a)!.x += dx * push;
        force.get(a)!.y += dy * push;
        force.get(b)!.x -= dx * push;
        force.get(b)!.y -= dy * push;
      }
    }
    // springs along edges
    for (const edge of graph.edges) {
      const pa = positions.get(edge.src);
      const pb = positions.get(edge.dst);
      if (!pa || !pb) continue;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(1, Math.sqrt(dx * dx + dy * dy));
      const pull = (dist - springLength) * 0.02 * Math.min(3, edge.weight);
      force.get(edge.src)!.x += (dx / dist) * pull;
      force.get(edge.src)!.y += (dy / dist) * pull;
      force.get(edge.dst)!.x -= (dx / dist) * pull;
      force.get(edge.dst)!.y -= (dy / dist) * pull;
    }
    // gentle centering, then integrate with cooling
    const cooling = 1 - step / iterations;
    for (const node of graph.nodes) {
      const p = positions.get(node.id)!;
      const f = force.get(node.id)!;
      f.x += (cx - p.x) * 0.01;
      f.y += (cy - p.y) * 0.01;
      p.x += Math.max(-12, Math.min(12, f.x)) * cooling;
      p.y += Math.max(-12, Math.min(12, f.y)) * cooling;
      p.x = Math.max(MAX_RADIUS, Math.min(width - MAX_RADIUS, p.x));
      p.y = Math.max(MAX_RADIUS, Math.min(height - MAX_RADIUS, p.y));
    }
  }

  return {
    nodes: graph.nodes.map((node) => ({
      id: node.id,
      x: positions.get(node.id)!.x,
      y: positions.get(node.id)!.y,
      radius: nodeRadius(node.score, maxScore),
      score: node.score,
    })),
    edges: graph.edges.map((e) => ({ src: e.src, dst: e.dst, kind: e.kind, weight: e.weight })),
    width,
    height,
  };
}
