/** What-if UI wiring: editor -> debounced simulate -> charts + compare. */

import { ApiClient, ApiError } from "./api.js";
import { LineChart, trainingSpans } from "./chart.js";
import { ComparePanel, MAX_PINS } from "./compare.js";
import { fmt, fmtYears } from "./format.js";
import { LatestGate, debounce } from "./latest.js";
import {
  DEFAULT_EDITOR,
  EditorState,
  describeScenario,
  fromScenarioDoc,
  scenarioKey,
  toScenarioDoc,
  validateEditor,
} from "./scenario.js";
import type { PresetsResponse, SimulateResponse } from "./types.js";

const api = new ApiClient(
  (window as unknown as { GLYCOSIM_API?: string }).GLYCOSIM_API ?? "http://127.0.0.1:8077",
);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const state: EditorState = { ...DEFAULT_EDITOR };
const gate = new LatestGate<SimulateResponse>();
const compare = new ComparePanel();
let lastResponse: SimulateResponse | null = null;
let lastKey = "";

const charts = {
  G: new LineChart($("chart-g") as HTMLCanvasElement),
  I: new LineChart($("chart-i") as HTMLCanvasElement),
  SI: new LineChart($("chart-si") as HTMLCanvasElement),
  Vl: new LineChart($("chart-vl") as HTMLCanvasElement),
};

function years(resp: SimulateResponse): number[] {
  return resp.t_days.map((d) => d / 365);
}

function renderCharts(resp: SimulateResponse): void {
  const x = years(resp);
  const spans = trainingSpans(resp.events);
  const crossing =
    resp.time_to_diabetes_days === null
      ? null
      : { value: resp.time_to_diabetes_days / 365, label: "T2D onset" };
  charts.G.update({
    title: "Basal glucose", unit: "mg/dl",
    series: [{ label: "G", x, y: resp.fields.G, color: "#6fb1ff" }],
    thresholdY: { value: resp.diabetic_threshold, label: `${resp.diabetic_threshold} mg/dl` },
    markerX: crossing,
    trainingSpans: spans,
  });
  charts.I.update({
    title: "Basal insulin", unit: "µU/ml",
    series: [{ label: "I", x, y: resp.fields.I, color: "#7fd6a0" }],
    trainingSpans: spans, yMin: 0,
  });
  charts.SI.update({
    title: "Insulin sensitivity vs no-exercise baseline", unit: "ml/µU/day",
    series: [
      { label: "S_I", x, y: resp.fields.S_I, color: "#67e06f" },
      { label: "baseline", x, y: resp.baseline_si, color: "#c060c0", dashed: true },
    ],
    band: { x, lower: resp.baseline_si, upper: resp.fields.S_I,
            color: "rgba(103, 224, 111, 0.15)" },
    trainingSpans: spans,
  });
  charts.Vl.update({
    title: "Cumulative IL-6 exposure", unit: "(pg/ml)·min",
    series: [{ label: "Vl", x, y: resp.fields.Vl, color: "#e0c060" }],
    trainingSpans: spans, yMin: 0,
  });

  const m = resp.metrics;
  const lastYear = Math.floor(x[x.length - 1]);
  $("readout").innerHTML = [
    `G(end) <b>${fmt(resp.fields.G[resp.fields.G.length - 1], 1)}</b> mg/dl`,
    `I(end) <b>${fmt(resp.fields.I[resp.fields.I.length - 1], 1)}</b> µU/ml`,
    `crossed ${resp.diabetic_threshold} mg/dl: <b>${fmtYears(resp.time_to_diabetes_days)}</b>`,
    `S_I improvement at 1 y: <b>${fmt(m.si_improvement_pct_at["1"] ?? null, 1)}%</b>`,
    `points: ${resp.n_points}, horizon ${lastYear} y`,
  ].join(" • ");
}

function renderCompare(): void {
  const anchors = compare.anchorYears();
  const head = ["scenario", ...anchors.map((y) => `G ${y}y`), ...anchors.map((y) => `I ${y}y`), "T2D onset"];
  const rows = compare.rows().map((r) => {
    const cells = [r.label];
    for (const y of anchors) cells.push(fmt(r.anchors[String(y)]?.G, 0));
    for (const y of anchors) cells.push(fmt(r.anchors[String(y)]?.I, 0));
    cells.push(r.timeToDiabetesYears === null ? "never" : `${r.timeToDiabetesYears.toFixed(1)} y`);
    return cells;
  });
  const table = $("compare-table");
  table.innerHTML =
    `<tr>${head.map((h) => `<th>${h}</th>`).join("")}</tr>` +
    rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  $("pin-count").textContent = `${compare.pins.length}/${MAX_PINS}`;
}

function setStatus(text: string, kind: "ok" | "busy" | "err" = "ok"): void {
  const el = $("status");
  el.textContent = text;
  el.className = `status ${kind}`;
}

async function runSimulation(): Promise<void> {
  const problem = validateEditor(state);
  if (problem) {
    setStatus(problem, "err");
    return;
  }
  const doc = toScenarioDoc(state);
  const key = scenarioKey(doc);
  setStatus("simulating…", "busy");
  try {
    const resp = await gate.submit(key, () => api.simulate(doc));
    if (resp === null) return; // superseded or queued
    lastResponse = resp;
    lastKey = key;
    renderCharts(resp);
    setStatus("ready");
  } catch (err) {
    setStatus(err instanceof ApiError ? `service: ${err.message}` : String(err), "err");
  }
}

gate.onSettled = (key, resp) => {
  lastResponse = resp;
  lastKey = key;
  renderCharts(resp);
  setStatus("ready");
};

const debouncedRun = debounce(runSimulation, 300);

function bindEditor(): void {
  const intensity = $("intensity") as HTMLInputElement;
  const intensityOut = $("intensity-value");
  const minutes = $("minutes") as HTMLInputElement;
  const freq = $("frequency") as HTMLSelectElement;
  const tau = $("tau-si") as HTMLSelectElement;
  const tauCustom = $("tau-custom") as HTMLInputElement;
  const horizon = $("horizon") as HTMLInputElement;
  const stop = $("stop-year") as HTMLInputElement;

  const sync = () => {
    state.intensity = Number(intensity.value);
    intensityOut.textContent = `${state.intensity}%` +
      (state.intensity === 50 ? " (moderate)" : state.intensity === 75 ? " (vigorous)" : "");
    state.minutesPerSession = Number(minutes.value);
    state.sessionsPerWeek = Number(freq.value);
    state.tauSI = tau.value === "custom" ? Number(tauCustom.value) : Number(tau.value);
    tauCustom.style.display = tau.value === "custom" ? "" : "none";
    state.horizonYears = Number(horizon.value);
    state.stopYear = stop.value === "" ? null : Number(stop.value);
    debouncedRun();
  };
  for (const el of [intensity, minutes, freq, tau, tauCustom, horizon, stop]) {
    el.addEventListener("input", sync);
  }

  $("pin-btn").addEventListener("click", () => {
    if (!lastResponse) return;
    const ok = compare.pin({
      label: describeScenario(state),
      key: lastKey,
      doc: toScenarioDoc(state),
      response: lastResponse,
    });
    if (!ok) setStatus(`at most ${MAX_PINS} pinned scenarios`, "err");
    renderCompare();
  });
  $("clear-pins-btn").addEventListener("click", () => {
    compare.clear();
    renderCompare();
  });
}

async function bindPresets(): Promise<void> {
  const presetSel = $("preset") as HTMLSelectElement;
  const armSel = $("preset-arm") as HTMLSelectElement;
  let presets: PresetsResponse = {};
  try {
    presets = await api.presets();
  } catch {
    setStatus("service unreachable; presets unavailable", "err");
    return;
  }
  presetSel.innerHTML = '<option value="">custom…</option>' +
    Object.keys(presets).map((n) => `<option value="${n}">${n}</option>`).join("");
  const fillArms = () => {
    const p = presets[presetSel.value];
    armSel.innerHTML = p
      ? p.scenarios.map((s, i) =>
          `<option value="${i}">${Object.entries(s.labels)
            .map(([k, v]) => `${k}=${v}`).join(", ")}</option>`).join("")
      : "";
    armSel.style.display = p ? "" : "none";
  };
  const loadArm = () => {
    const p = presets[presetSel.value];
    if (!p) return;
    const entry = p.scenarios[Number(armSel.value) || 0];
    Object.assign(state, fromScenarioDoc(entry.scenario));
    reflectEditor();
    debouncedRun();
  };
  presetSel.addEventListener("change", () => {
    fillArms();
    if (presetSel.value) loadArm();
  });
  armSel.addEventListener("change", loadArm);
}

function reflectEditor(): void {
  ($("intensity") as HTMLInputElement).value = String(state.intensity);
  ($("minutes") as HTMLInputElement).value = String(state.minutesPerSession);
  ($("frequency") as HTMLSelectElement).value = String(state.sessionsPerWeek);
  const tauSel = $("tau-si") as HTMLSelectElement;
  if (state.tauSI === 150 || state.tauSI === 180) {
    tauSel.value = String(state.tauSI);
  } else {
    tauSel.value = "custom";
    ($("tau-custom") as HTMLInputElement).value = String(state.tauSI);
  }
  ($("horizon") as HTMLInputElement).value = String(state.horizonYears);
  ($("stop-year") as HTMLInputElement).value =
    state.stopYear === null ? "" : String(state.stopYear);
  $("intensity-value").textContent = `${state.intensity}%`;
}

bindEditor();
void bindPresets();
reflectEditor();
void runSimulation();
