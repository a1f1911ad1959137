// DOM wiring: everything stateful lives in SessionState, everything
// service-facing in ApiClient, so this file stays a thin event loop.

import { ApiClient, ApiError, SolveRecord } from "./api.js";
import { maskGridSvg, parallelCoordsSvg, resultTableHtml, scatterSvg, fmt } from "./charts.js";
import { SessionState, sliderRange } from "./state.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "http://127.0.0.1:8787");

let state: SessionState | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, busy = false): void {
  const status = el<HTMLDivElement>("status");
  status.textContent = text;
  status.className = busy ? "status busy" : "status";
}

function renderSliders(): void {
  if (!state) return;
  const st = state;
  const panel = el<HTMLDivElement>("sliders");
  panel.innerHTML = "";
  st.criteria.forEach((meta, j) => {
    const range = sliderRange(meta);
    const row = document.createElement("div");
    row.className = "slider-row";
    const label = document.createElement("label");
    label.textContent = meta.name;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(range.lo);
    slider.max = String(range.hi);
    slider.step = String((range.hi - range.lo) / 1000 || 1);
    slider.value = String(st.sliders[j]);
    const number = document.createElement("input");
    number.type = "number";
    number.value = String(st.sliders[j]);
    const span = document.createElement("span");
    span.className = "range-hint";
    span.textContent = `[${fmt(meta.zMin)}, ${fmt(meta.zMax)}]`;
    slider.addEventListener("input", () => {
      const v = st.setSlider(j, Number(slider.value));
      number.value = String(v);
      renderCharts();
    });
    number.addEventListener("change", () => {
      const v = st.setSlider(j, Number(number.value));
      slider.value = String(v);
      number.value = String(v);
      renderCharts();
    });
    row.append(label, slider, number, span);
    panel.appendChild(row);
  });
}

function renderHistory(): void {
  if (!state) return;
  const list = el<HTMLOListElement>("history");
  list.innerHTML = "";
  state.history.forEach((record, i) => {
    const item = document.createElement("li");
    item.className = i === state!.selected ? "history-entry selected" : "history-entry";
    item.textContent =
      `#${i} ref (${record.reference.map(fmt).join(", ")}) → ` +
      `(${record.criteria.map(fmt).join(", ")}) [${record.status}]`;
    item.addEventListener("click", () => {
      state!.select(i);
      renderSliders();
      renderResult();
      renderHistory();
      renderCharts();
    });
    list.appendChild(item);
  });
}

function selectedRecord(): SolveRecord | null {
  if (!state || state.selected === null) return null;
  return state.history[state.selected] ?? null;
}

function renderResult(): void {
  const panel = el<HTMLDivElement>("result");
  const record = selectedRecord();
  if (!state || !record) {
    panel.innerHTML = "<p>No solve yet. Set aspirations and submit.</p>";
    return;
  }
  const ach = record.achievement === null ? "n/a" : fmt(record.achievement);
  panel.innerHTML =
    `<p>status <b>${record.status}</b>, achievement <b>${ach}</b></p>` +
    resultTableHtml(state.criteria, record);
}

function renderCharts(): void {
  if (!state) return;
  const chart = el<HTMLDivElement>("chart");
  const reference = state.referencePoint();
  if (state.criteria.length === 2) {
    chart.innerHTML = scatterSvg(state.criteria, state.history, reference, state.selected);
  } else {
    chart.innerHTML = parallelCoordsSvg(state.criteria, state.history, reference, state.selected);
  }
  const maskPanel = el<HTMLDivElement>("mask");
  const record = selectedRecord();
  if (record?.decision?.kind === "cell_mask" && record.decision.mask) {
    maskPanel.innerHTML = "<h3>managed cells</h3>" + maskGridSvg(record.decision.mask);
  } else {
    maskPanel.innerHTML = "";
  }
}

function renderAll(): void {
  renderSliders();
  renderHistory();
  renderResult();
  renderCharts();
}

async function startDemo(kind: "mdp" | "grid"): Promise<void> {
  try {
    setStatus(`creating ${kind} demo session (computing bounds)…`, true);
    const seed = Number((el<HTMLInputElement>("seed")).value) || 0;
    const request =
      kind === "mdp"
        ? { seed, states: 10, actions: 4, horizon: 20 }
        : { seed, rows: 8, cols: 8, k: 4 };
    const info = await api.createDemo(kind, request);
    state = new SessionState(info);
    state.replaceHistory(await api.history(info.id));
    el<HTMLDivElement>("session-label").textContent =
      `session ${info.id} (${kind}, ${info.criteria.length} criteria)`;
    setStatus("ready");
    renderAll();
  } catch (err) {
    setStatus(err instanceof ApiError ? err.message : String(err));
  }
}

async function submit(): Promise<void> {
  if (!state) return;
  if (!state.beginSolve()) {
    setStatus("a solve is already running for this session");
    return;
  }
  const button = el<HTMLButtonElement>("submit");
  button.disabled = true;
  setStatus("solving…", true);
  try {
    const record = await api.submitReference(state.sessionId, state.referencePoint(), (token) => {
      state!.markPending(token);
      setStatus(`solving… (async token ${token.slice(0, 8)})`, true);
    });
    state.completeSolve(record);
    setStatus(`solved: ${record.status}`);
  } catch (err) {
    state.failSolve();
    setStatus(err instanceof ApiError ? err.message : String(err));
  } finally {
    button.disabled = false;
    renderAll();
  }
}

export function boot(): void {
  el<HTMLButtonElement>("demo-mdp").addEventListener("click", () => void startDemo("mdp"));
  el<HTMLButtonElement>("demo-grid").addEventListener("click", () => void startDemo("grid"));
  el<HTMLButtonElement>("submit").addEventListener("click", () => void submit());
  setStatus("no session; start a demo");
}

boot();
