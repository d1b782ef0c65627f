/**
 * UI round-trip against the real service (acceptance criterion for the
 * frontend): load the dose-response preset, pin the u=50 and u=60 arms, and
 * check the compare panel shows the same anchor values the CLI reports, with
 * the threshold marker matching the service crossing within one sample step.
 *
 * Spawns the Python service; skipped when python3/glycosim are unavailable.
 */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ComparePanel } from "../src/compare.js";
import { scenarioKey } from "../src/scenario.js";
import type { PresetsResponse, ScenarioDoc, SimulateResponse } from "../src/types.js";

const PORT = 8741;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO = join(__dirname, "..", "..");

function pythonAvailable(): boolean {
  try {
    execFileSync("python3", ["-c", "import glycosim"], { cwd: REPO, timeout: 60_000 });
    return true;
  } catch {
    return false;
  }
}

const haveService = pythonAvailable();
const maybe = haveService ? describe : describe.skip;

maybe("UI round-trip via live service", () => {
  let proc: ChildProcess;
  const api = new ApiClient(BASE);
  let workdir: string;

  beforeAll(async () => {
    workdir = mkdtempSync(join(tmpdir(), "glycosim-ui-"));
    proc = spawn("python3", ["-m", "glycosim.service", "--port", String(PORT)],
                 { cwd: REPO, stdio: "ignore" });
    const deadline = Date.now() + 120_000;
    for (;;) {
      try {
        await api.health();
        break;
      } catch {
        if (Date.now() > deadline) throw new Error("service did not come up");
        await new Promise((r) => setTimeout(r, 500));
      }
    }
  }, 150_000);

  afterAll(() => {
    proc?.kill();
    if (workdir) rmSync(workdir, { recursive: true, force: true });
  });

  it("pins dose-response arms and matches CLI anchor metrics", async () => {
    const presets: PresetsResponse = await api.presets();
    const dose = presets["dose-response"];
    expect(dose).toBeDefined();

    const panel = new ComparePanel();
    const crossings: Array<{ doc: ScenarioDoc; resp: SimulateResponse }> = [];
    for (const u of [50, 60]) {
      const entry = dose.scenarios.find(
        (s) => s.labels["intensity_u"] === u && s.labels["tau_SI"] === 150,
      );
      expect(entry).toBeDefined();
      const resp = await api.simulate(entry!.scenario);
      panel.pin({
        label: `u=${u}%`,
        key: scenarioKey(entry!.scenario),
        doc: entry!.scenario,
        response: resp,
      });
      crossings.push({ doc: entry!.scenario, resp });
    }

    // compare panel reproduces the service metrics verbatim
    const rows = panel.rows();
    expect(rows).toHaveLength(2);
    for (const [i, u] of [50, 60].entries()) {
      const m = crossings[i].resp.metrics;
      for (const anchor of ["10", "15", "20"]) {
        expect(rows[i].anchors[anchor].G).toBe(m.G_at[anchor]);
        expect(rows[i].anchors[anchor].I).toBe(m.I_at[anchor]);
      }
      // CLI reports the same anchors for the same scenario
      const metricsPath = join(workdir, `m${u}.json`);
      execFileSync("python3", [
        "-m", "glycosim.cli", "simulate",
        "--sessions-per-week", "3", "--minutes-per-session", "60",
        "--intensity", String(u), "--tau-si", "150",
        "--horizon-years", "20", "--quiet",
        "--metrics-out", metricsPath,
      ], { cwd: REPO, timeout: 300_000 });
      const cli = JSON.parse(readFileSync(metricsPath, "utf-8"));
      for (const anchor of ["10", "15", "20"]) {
        expect(Math.abs(cli.G_at[anchor] - m.G_at[anchor])).toBeLessThan(1e-6);
        expect(Math.abs(cli.I_at[anchor] - m.I_at[anchor])).toBeLessThan(1e-6);
      }
    }
  }, 400_000);

  it("threshold marker coincides with the service crossing within one sample", async () => {
    const resp = await api.simulate({
      programs: [],
      decay: { S_I_initial: 0.8, S_I_target: 0.18, tau_SI: 150 },
      horizon_years: 5,
      solver: "hybrid",
      sample_interval_min: 1440,
    });
    const marker = resp.time_to_diabetes_days;
    expect(marker).not.toBeNull();
    // first decimated sample at/above the threshold
    const g = resp.fields.G;
    const i = g.findIndex((v) => v >= resp.diabetic_threshold);
    expect(i).toBeGreaterThan(0);
    const gap = resp.t_days[i] - resp.t_days[i - 1];
    expect(marker!).toBeGreaterThanOrEqual(resp.t_days[i - 1] - 1e-9);
    expect(marker!).toBeLessThanOrEqual(resp.t_days[i] + gap + 1e-9);
  }, 120_000);

  it("re-simulating a pinned scenario returns identical curves", async () => {
    const doc: ScenarioDoc = {
      programs: [{ sessions_per_week: 3, minutes_per_session: 60,
                   intensity_u: 50, start_day: 0, end_day: null }],
      decay: { S_I_initial: 0.8, S_I_target: 0.18, tau_SI: 150 },
      horizon_years: 2,
      solver: "hybrid",
      sample_interval_min: 1440,
    };
    const a = await api.simulate(doc);
    const b = await api.simulate(doc);
    expect(b.fields.G).toEqual(a.fields.G);
    expect(b.fields.S_I).toEqual(a.fields.S_I);
  }, 120_000);
});
