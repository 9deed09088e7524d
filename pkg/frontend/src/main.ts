// Application shell: four views (documents, batch console, stats, graph)
// over the REST API. One streaming connection per running interactive job.

import { ApiClient, ApiError } from "./api.js";
import { queryErrorView, progressOf } from "./batch.js";
import { applyEvent, buildPanels, type PanelState } from "./panels.js";
import { h, renderGraph, renderHistogram, renderPanel } from "./render.js";
import { isTerminalJobState, type DocumentPayload, type ToolSpec } from "./types.js";

const api = new ApiClient("..");  // the UI is mounted at /ui/

const root = document.getElementById("app")!;
const views = ["documents", "batch", "stats", "graph"] as const;
type View = (typeof views)[number];

let toolCache: ToolSpec[] = [];

async function init(): Promise<void> {
  toolCache = await api.tools();
  const nav = h("nav", {}, []);
  for (const view of views) {
    const btn = h("button", { "data-view": view }, [view]);
    btn.addEventListener("click", () => show(view));
    nav.append(btn);
  }
  root.before(nav);
  show("documents");
}

function show(view: View): void {
  document.querySelectorAll("nav button").forEach((b) => {
    b.classList.toggle("active", b.getAttribute("data-view") === view);
  });
  root.replaceChildren();
  if (view === "documents") renderDocumentsView();
  if (view === "batch") renderBatchView();
  if (view === "stats") renderStatsView();
  if (view === "graph") renderGraphView();
}

// ---------------------------------------------------------------- documents

function renderDocumentsView(): void {
  const input = h("input", { placeholder: "query, e.g. topic:tech (empty = all)", value: "" });
  const results = h("div", { class: "doc-list" });
  const detail = h("div", { class: "doc-detail" });
  const searchBtn = h("button", {}, ["Search"]);
  const runSearch = async () => {
    try {
      const payload = await api.search(input.value, 20, true);
      results.replaceChildren();
      for (const doc of payload.docs ?? []) {
        const item = h("button", { class: "doc-item" }, [
          h("strong", {}, [doc.id]),
          h("span", { class: "muted" }, [` ${doc.text.slice(0, 80)}`]),
        ]);
        item.addEventListener("click", () => openDocument(doc, detail));
        results.append(item);
      }
      if (!payload.ids.length) results.append(h("p", { class: "muted" }, ["no matches"]));
    } catch (err) {
      results.replaceChildren(renderError(input.value, err));
    }
  };
  searchBtn.addEventListener("click", runSearch);
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") void runSearch();
  });
  root.append(h("div", { class: "toolbar" }, [input, searchBtn]), results, detail);
  void runSearch();
}

async function openDocument(doc: DocumentPayload, detail: HTMLElement): Promise<void> {
  const results = await api.results(doc.id);
  let panels = buildPanels(toolCache, results);
  const container = h("div", { class: "panels" });

  const repaint = () => {
    container.replaceChildren();
    for (const panel of panels) {
      container.append(
        renderPanel(panel, doc.text, {
          onRun: (toolId, force) => void runTool(toolId, force),
        }),
      );
    }
  };

  const runTool = async (toolId: string, force: boolean) => {
    panels = setStatus(panels, toolId, "queued");
    repaint();
    await api.streamInteractive(doc.id, [toolId], force, (event) => {
      panels = applyEvent(panels, event);
      repaint();
    });
    // refresh from storage so a reload would show the same thing
    panels = buildPanels(toolCache, await api.results(doc.id));
    repaint();
  };

  detail.replaceChildren(
    h("h2", {}, [doc.id]),
    h("p", { class: "doc-text" }, [doc.text]),
    container,
  );
  repaint();
}

function setStatus(panels: PanelState[], toolId: string, status: PanelState["status"]): PanelState[] {
  return panels.map((p) => (p.toolId === toolId ? { ...p, status } : p));
}

// -------------------------------------------------------------------- batch

function renderBatchView(): void {
  const query = h("input", { placeholder: "query (empty = whole corpus)", value: "" });
  const errorBox = h("div", { class: "query-error" });
  const preview = h("div", { class: "muted" });
  const toolPicker = h("div", { class: "tool-picker" });
  for (const tool of toolCache) {
    const label = h("label", {}, []);
    const box = h("input", { type: "checkbox", value: tool.tool_id });
    label.append(box, ` ${tool.tool_id}`);
    toolPicker.append(label);
  }
  const submit = h("button", { disabled: "true" }, ["Run batch"]);
  const progress = h("div", { class: "progress" });
  const bar = h("div", { class: "progress-bar" });
  progress.append(bar);
  const links = h("div", { class: "doc-list" });

  const refreshPreview = async () => {
    errorBox.replaceChildren();
    try {
      const found = await api.search(query.value, 5, false);
      const total = found.ids.length + (found.next_cursor ? "+" : "");
      preview.textContent = found.ids.length
        ? `matches: ${found.ids.join(", ")}${found.next_cursor ? ", ..." : ""} (${total})`
        : "no matching documents";
      submit.toggleAttribute("disabled", found.ids.length === 0);
    } catch (err) {
      preview.textContent = "";
      submit.toggleAttribute("disabled", true);
      errorBox.append(renderError(query.value, err));
    }
  };
  query.addEventListener("change", () => void refreshPreview());

  submit.addEventListener("click", async () => {
    const tools = [...toolPicker.querySelectorAll("input:checked")].map(
      (el) => (el as HTMLInputElement).value,
    );
    if (!tools.length) return;
    const accepted = await api.submitBatch(query.value, tools, false);
    links.replaceChildren(h("p", {}, [`job ${accepted.job_id}: ${accepted.task_count} tasks`]));
    for (;;) {
      const status = await api.jobStatus(accepted.job_id);
      const p = progressOf(status);
      bar.style.width = `${Math.round(p.frac * 100)}%`;
      bar.textContent = `${p.done}/${p.total}`;
      if (isTerminalJobState(status.state)) {
        links.append(h("p", {}, [`state: ${status.state}`]));
        for (const docId of new Set(status.tasks.map((t) => t.doc_id))) {
          links.append(h("a", { href: `#doc/${docId}` }, [docId]), h("br", {}));
        }
        break;
      }
      await sleep(500);
    }
  });

  root.append(
    h("div", { class: "toolbar" }, [query]),
    errorBox,
    preview,
    toolPicker,
    submit,
    progress,
    links,
  );
  void refreshPreview();
}

function renderError(query: string, err: unknown): HTMLElement {
  if (err instanceof ApiError) {
    const view = queryErrorView(query, err.body);
    if (view) {
      return h("p", { class: "error-text" }, [
        "syntax error: ",
        h("code", {}, [view.before]),
        h("span", { class: "caret-error" }, ["^"]),
        h("code", {}, [view.after]),
        ` — ${view.message}`,
      ]);
    }
    return h("p", { class: "error-text" }, [err.body.message]);
  }
  return h("p", { class: "error-text" }, [String(err)]);
}

// -------------------------------------------------------------------- stats

function renderStatsView(): void {
  const query = h("input", { placeholder: "query (empty = whole corpus)", value: "" });
  // the field picker offers only numeric projections, so a non-numeric
  // choice is impossible by construction
  const fieldPicker = h("select", {});
  const numericFields = toolCache
    .flatMap((tool) => tool.output_projections)
    .filter((p) => p.endsWith("score"));
  for (const field of numericFields.length ? numericFields : ["sentiment.score"]) {
    fieldPicker.append(h("option", { value: field }, [field]));
  }
  const plot = h("div", { class: "plot" });
  const draw = async () => {
    try {
      const stats = await api.stats(query.value, fieldPicker.value);
      plot.replaceChildren(
        stats.buckets.some((b) => b > 0)
          ? renderHistogram(stats)
          : h("p", { class: "muted" }, ["no data for this query"]),
      );
    } catch (err) {
      plot.replaceChildren(renderError(query.value, err));
    }
  };
  const go = h("button", {}, ["Plot"]);
  go.addEventListener("click", () => void draw());
  root.append(h("div", { class: "toolbar" }, [query, fieldPicker, go]), plot);
  void draw();
}

// -------------------------------------------------------------------- graph

function renderGraphView(): void {
  const query = h("input", { placeholder: "query over posts (empty = all)", value: "source:social" });
  const plot = h("div", { class: "plot" });
  const postList = h("div", { class: "doc-list" });
  const draw = async () => {
    try {
      const graph = await api.graph(query.value);
      if (!graph.nodes.length) {
        plot.replaceChildren(h("p", { class: "muted" }, ["empty graph"]));
        postList.replaceChildren();
        return;
      }
      plot.replaceChildren(
        renderGraph(graph, (author) => void showPosts(author)),
      );
    } catch (err) {
      plot.replaceChildren(renderError(query.value, err));
    }
  };
  const showPosts = async (author: string) => {
    const found = await api.search(`author:${author}`, 20, true);
    postList.replaceChildren(h("h3", {}, [`posts by ${author}`]));
    for (const doc of found.docs ?? []) {
      postList.append(h("p", {}, [h("strong", {}, [doc.id]), ` ${doc.text}`]));
    }
  };
  const go = h("button", {}, ["Draw"]);
  go.addEventListener("click", () => void draw());
  root.append(h("div", { class: "toolbar" }, [query, go]), plot, postList);
  void draw();
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

void init();
