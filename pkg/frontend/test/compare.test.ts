import { describe, expect, it } from "vitest";

import { ComparePanel, MAX_PINS, PinnedScenario } from "../src/compare.js";
import { DEFAULT_EDITOR, scenarioKey, toScenarioDoc } from "../src/scenario.js";
import type { SimulateResponse } from "../src/types.js";

function fakeResponse(gAt: Record<string, number>, ttd: number | null): SimulateResponse {
  return {
    t_days: [0, 365],
    fields: { G: [99.8, 110] },
    events: [],
    metrics: {
      G_at: gAt,
      I_at: Object.fromEntries(Object.keys(gAt).map((k) => [k, 30])),
      si_improvement_pct_at: {},
      time_to_diabetes_days: ttd,
      vl_peak: 0,
      final_G_slope_per_year: 0,
    },
    baseline_si: [0.8, 0.5],
    diabetic_threshold: 126,
    time_to_diabetes_days: ttd,
    n_points: 2,
  };
}

function pin(label: string, intensity: number, gAt: Record<string, number>,
             ttd: number | null = null): PinnedScenario {
  const doc = toScenarioDoc({ ...DEFAULT_EDITOR, intensity });
  return { label, key: scenarioKey(doc), doc, response: fakeResponse(gAt, ttd) };
}

describe("ComparePanel", () => {
  it("caps the number of pins", () => {
    const panel = new ComparePanel();
    for (let i = 0; i < MAX_PINS; i++) {
      expect(panel.pin(pin(`s${i}`, 10 + i, { "5": 120 + i }))).toBe(true);
    }
    expect(panel.pin(pin("extra", 90, { "5": 100 }))).toBe(false);
    expect(panel.pins).toHaveLength(MAX_PINS);
  });

  it("re-pinning the same scenario replaces its snapshot", () => {
    const panel = new ComparePanel();
    panel.pin(pin("a", 50, { "5": 126 }));
    panel.pin(pin("a2", 50, { "5": 127 }));
    expect(panel.pins).toHaveLength(1);
    expect(panel.rows()[0].anchors["5"].G).toBe(127);
  });

  it("collects the union of anchor years in order", () => {
    const panel = new ComparePanel();
    panel.pin(pin("short", 50, { "4": 120, "5": 126 }));
    panel.pin(pin("long", 60, { "5": 117, "10": 117, "20": 101 }));
    expect(panel.anchorYears()).toEqual([4, 5, 10, 20]);
    const rows = panel.rows();
    expect(rows[0].anchors["10"].G).toBeNull();   // outside the short horizon
    expect(rows[1].anchors["10"].G).toBe(117);
  });

  it("reports threshold crossing in years", () => {
    const panel = new ComparePanel();
    panel.pin(pin("base", 10, { "5": 150 }, 730));
    expect(panel.rows()[0].timeToDiabetesYears).toBeCloseTo(2.0);
  });

  it("unpin removes by key", () => {
    const panel = new ComparePanel();
    const a = pin("a", 50, { "5": 126 });
    panel.pin(a);
    panel.unpin(a.key);
    expect(panel.pins).toHaveLength(0);
  });
});
