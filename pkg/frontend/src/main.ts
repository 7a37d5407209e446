/** Browser entry point: wires the API client, reducer, and SVG rendering. */

import { METRIC_KEYS, SessionApi, ApiError, type Report } from "./api.js";
import { buildSeries, layoutSeries, scatterLayout } from "./chart.js";
import { labelsToCsv } from "./labels.js";
import { canStep, initialView, reduce, type SessionView } from "./state.js";

const CHART_W = 280;
const CHART_H = 160;

const api = new SessionApi("", (url, init) =>
  fetch(url, init).then((r) => ({ status: r.status, text: () => r.text() })),
);

let view: SessionView | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function dispatch(action: Parameters<typeof reduce>[1]): void {
  if (!view) return;
  view = reduce(view, action);
  render();
}

function renderChart(container: HTMLElement, reports: Report[], key: (typeof METRIC_KEYS)[number]): void {
  const series = buildSeries(reports, key);
  if (series.length === 0) {
    container.innerHTML = `<p class="empty">no reports yet</p>`;
    return;
  }
  const geo = layoutSeries(series, CHART_W, CHART_H);
  const dots = geo.coords
    .map(([x, y], i) => {
      const r = i === geo.highlight ? 4 : 2;
      const cls = i === geo.highlight ? "dot latest" : "dot";
      return `<circle class="${cls}" cx="${x}" cy="${y}" r="${r}">` +
        `<title>K=${series[i].k}: ${series[i].raw}</title></circle>`;
    })
    .join("");
  const latest = series[series.length - 1];
  container.innerHTML =
    `<h3>${key}</h3>` +
    `<svg viewBox="0 0 ${CHART_W} ${CHART_H}">` +
    `<polyline fill="none" stroke="currentColor" points="${geo.polyline}"/>${dots}</svg>` +
    `<p class="latest">K=${latest.k}: <code>${latest.raw}</code></p>`;
}

function renderSizes(container: HTMLElement, reports: Report[]): void {
  if (reports.length === 0) {
    container.innerHTML = "";
    return;
  }
  const last = reports[reports.length - 1];
  const rows = last.sizes
    .map((size, i) => `<tr><td>${i}</td><td>${size}</td></tr>`)
    .join("");
  container.innerHTML =
    `<h3>cluster sizes at K=${last.K}</h3>` +
    `<table><tr><th>cluster</th><th>size</th></tr>${rows}</table>`;
}

async function renderScatter(container: HTMLElement): Promise<void> {
  if (!view || !view.points || view.reports.length === 0) {
    container.innerHTML = "";
    return;
  }
  const last = view.reports[view.reports.length - 1];
  const labels = await api.clusters(view.id, last.K);
  const palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
  const dots = scatterLayout(view.points, labels.labels, 360, 360)
    .map((p) => `<circle cx="${p.x}" cy="${p.y}" r="3" fill="${palette[p.label % palette.length]}"/>`)
    .join("");
  container.innerHTML = `<h3>scatter at K=${last.K}</h3><svg viewBox="0 0 360 360">${dots}</svg>`;
}

function render(): void {
  if (!view) return;
  el("session-id").textContent = view.id;
  el("status").textContent =
    view.status === "accepted" ? `accepted at K=${view.acceptedK}` : "active";
  const banner = el("error");
  banner.textContent = view.error ?? "";
  banner.style.display = view.error ? "block" : "none";
  (el("step") as HTMLButtonElement).disabled = !canStep(view);
  (el("accept") as HTMLButtonElement).disabled =
    view.status !== "active" || view.reports.length === 0;
  const charts = el("charts");
  charts.innerHTML = METRIC_KEYS.map((k) => `<div class="chart" id="chart-${k}"></div>`).join("");
  for (const key of METRIC_KEYS) {
    renderChart(el(`chart-${key}`), view.reports, key);
  }
  renderSizes(el("sizes"), view.reports);
  void renderScatter(el("scatter"));
}

async function onCreate(): Promise<void> {
  const spec = JSON.parse((el("graph-spec") as HTMLTextAreaElement).value);
  const coordsText = (el("coords") as HTMLTextAreaElement).value.trim();
  const points = coordsText
    ? coordsText.split("\n").map((line) => {
        const [x, y] = line.split(",").map(Number);
        return [x, y] as [number, number];
      })
    : null;
  try {
    const id = await api.createSession(spec);
    view = initialView(id, points);
    const existing = await api.metrics(id);
    for (const report of existing) {
      view = reduce(reduce(view, { type: "step-start" }), {
        type: "step-success",
        report,
      });
    }
    render();
  } catch (err) {
    el("error").textContent = err instanceof ApiError ? err.message : String(err);
    el("error").style.display = "block";
  }
}

async function onStep(): Promise<void> {
  if (!view || !canStep(view)) return;
  dispatch({ type: "step-start" });
  try {
    const report = await api.step(view.id);
    dispatch({ type: "step-success", report });
  } catch (err) {
    dispatch({
      type: "step-error",
      message: err instanceof ApiError ? err.message : String(err),
    });
  }
}

async function onAccept(): Promise<void> {
  if (!view || view.reports.length === 0) return;
  const chosen = Number((el("accept-k") as HTMLInputElement).value);
  try {
    await api.accept(view.id, chosen);
    dispatch({ type: "accept-success", K: chosen });
    const labels = await api.clusters(view.id, chosen);
    const blob = new Blob([labelsToCsv(labels)], { type: "text/csv" });
    const link = el<HTMLAnchorElement>("download");
    link.href = URL.createObjectURL(blob);
    link.download = `labels-k${chosen}.csv`;
    link.style.display = "inline";
  } catch (err) {
    dispatch({
      type: "accept-error",
      message: err instanceof ApiError ? err.message : String(err),
    });
  }
}

export function start(): void {
  el("create").addEventListener("click", () => void onCreate());
  el("step").addEventListener("click", () => void onStep());
  el("accept").addEventListener("click", () => void onAccept());
}

if (typeof document !== "undefined" && document.getElementById("create")) {
  start();
}
