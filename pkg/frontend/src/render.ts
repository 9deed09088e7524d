// DOM renderers. All numbers and spans come straight from API payloads;
// nothing is recomputed here.

import { chainColor, segmentText } from "./highlights.js";
import { histogramBars } from "./histogram.js";
import { layoutGraph } from "./graphview.js";
import type { PanelState } from "./panels.js";
import type { GraphPayload, Mention, StatsPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  for (const child of children) el.append(child);
  return el;
}

// ------------------------------------------------------------------ panels

export interface PanelActions {
  onRun: (toolId: string, force: boolean) => void;
}

export function renderPanel(panel: PanelState, docText: string, actions: PanelActions): HTMLElement {
  const badge = h("span", { class: `badge badge-${panel.status}` }, [panel.status]);
  if (panel.fromCache && panel.status === "ok") badge.append(" (cached)");
  const runBtn = h("button", { class: "run" }, [panel.status === "idle" ? "Run" : "Re-run (force)"]);
  runBtn.addEventListener("click", () => actions.onRun(panel.toolId, panel.status !== "idle"));
  const head = h("div", { class: "panel-head" }, [
    h("strong", {}, [panel.toolId]),
    badge,
    runBtn,
  ]);
  const body = h("div", { class: "panel-body" });
  body.append(renderPanelPayload(panel, docText));
  return h("section", { class: "panel", "data-tool": panel.toolId }, [head, body]);
}

function renderPanelPayload(panel: PanelState, docText: string): Node {
  if (panel.status === "error") {
    return h("p", { class: "error-text" }, [panel.error ?? "failed"]);
  }
  if (panel.status !== "ok" || panel.payload == null) {
    return h("p", { class: "muted" }, [panel.status === "running" ? "running..." : "no result yet"]);
  }
  const payload = panel.payload as Record<string, unknown>;
  if (panel.toolId === "sentiment" && typeof payload.score === "number") {
    return h("p", {}, [
      h("span", { class: `sentiment sentiment-${payload.label}` }, [String(payload.label)]),
      ` score ${(payload.score as number).toFixed(3)}`,
    ]);
  }
  if ((panel.toolId === "ner" || panel.toolId === "coref") && Array.isArray(payload.mentions)) {
    return renderHighlights(docText, payload.mentions as Mention[]);
  }
  if (panel.toolId === "entity_linking" && Array.isArray(payload.entities)) {
    return renderEntities(docText, payload.entities as Mention[]);
  }
  return h("pre", { class: "json" }, [JSON.stringify(panel.payload, null, 2)]);
}

export function renderHighlights(text: string, mentions: Mention[]): HTMLElement {
  const container = h("p", { class: "highlighted" });
  for (const segment of segmentText(text, mentions)) {
    if (!segment.mention) {
      container.append(segment.text);
      continue;
    }
    const mark = h("mark", { title: segment.mention.etype }, [segment.text]);
    mark.style.backgroundColor = chainColor(segment.mention.chain_id);
    const sup = h("sup", {}, [segment.mention.etype]);
    mark.append(sup);
    container.append(mark);
  }
  return container;
}

function renderEntities(text: string, entities: Mention[]): HTMLElement {
  const wrapper = h("div", {});
  wrapper.append(renderHighlights(text, entities));
  const list = h("ul", { class: "entity-list" });
  for (const entity of entities) {
    if (entity.etype === "PRONOUN") continue;
    const item = h("li", {}, [`${entity.surface}: `]);
    if (entity.kb_id) {
      item.append(h("a", { href: `#kb/${entity.kb_id}`, class: "kb-link" }, [entity.kb_id]));
      item.append(` (score ${(entity.linking_score ?? 0).toFixed(3)})`);
    } else {
      item.append(h("span", { class: "muted" }, ["not linked"]));
    }
    list.append(item);
  }
  wrapper.append(list);
  return wrapper;
}

// --------------------------------------------------------------- histogram

export function renderHistogram(stats: StatsPayload, width = 560, height = 280): SVGSVGElement {
  const bars = histogramBars(stats);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "histogram");
  const plotH = height - 40;
  const barW = (width - 60) / Math.max(1, bars.length);
  bars.forEach((bar, i) => {
    const barH = Math.round(bar.frac * (plotH - 10));
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(40 + i * barW + 2));
    rect.setAttribute("y", String(plotH - barH));
    rect.setAttribute("width", String(Math.max(1, barW - 4)));
    rect.setAttribute("height", String(barH));
    rect.setAttribute("class", "hist-bar");
    svg.append(rect);
    const count = document.createElementNS(SVG_NS, "text");
    count.setAttribute("x", String(40 + i * barW + barW / 2));
    count.setAttribute("y", String(plotH - barH - 4));
    count.setAttribute("text-anchor", "middle");
    count.setAttribute("class", "hist-count");
    count.textContent = String(bar.count);
    svg.append(count);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(40 + i * barW + barW / 2));
    label.setAttribute("y", String(height - 8));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "hist-label");
    label.textContent = `(${bar.lo.toFixed(1)}, ${bar.hi.toFixed(1)}]`;
    svg.append(label);
  });
  return svg;
}

// ------------------------------------------------------------------- graph

export function renderGraph(
  graph: GraphPayload,
  onNodeClick: (id: string) => void,
  width = 640,
  height = 480,
): SVGSVGElement {
  const layout = layoutGraph(graph, width, height);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph");
  const positions = new Map(layout.nodes.map((n) => [n.id, n]));
  for (const edge of layout.edges) {
    const a = positions.get(edge.src);
    const b = positions.get(edge.dst);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", `edge edge-${edge.kind}`);
    line.setAttribute("stroke-width", String(Math.min(4, edge.weight)));
    svg.append(line);
  }
  for (const node of layout.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "node");
    group.addEventListener("click", () => onNodeClick(node.id));
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", String(node.radius));
    group.append(circle);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(node.x));
    label.setAttribute("y", String(node.y + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id;
    group.append(label);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.id}: pagerank ${node.score.toFixed(4)}`;
    group.append(title);
    svg.append(group);
  }
  return svg;
}
