import { describe, expect, it } from "vitest";

import {
  DEFAULT_EDITOR,
  PLACEMENT_YEAR_DAYS,
  describeScenario,
  fromScenarioDoc,
  scenarioKey,
  toScenarioDoc,
  validateEditor,
} from "../src/scenario.js";

describe("toScenarioDoc", () => {
  it("maps the default editor to a 3x60 moderate program", () => {
    const doc = toScenarioDoc(DEFAULT_EDITOR);
    expect(doc.programs).toHaveLength(1);
    expect(doc.programs[0]).toMatchObject({
      sessions_per_week: 3,
      minutes_per_session: 60,
      intensity_u: 50,
      end_day: null,
    });
    expect(doc.decay.tau_SI).toBe(150);
    expect(doc.solver).toBe("hybrid");
  });

  it("drops the program when any dose knob is zero", () => {
    for (const patch of [{ intensity: 0 }, { minutesPerSession: 0 }, { sessionsPerWeek: 0 }]) {
      const doc = toScenarioDoc({ ...DEFAULT_EDITOR, ...patch });
      expect(doc.programs).toHaveLength(0);
    }
  });

  it("maps the de-training year onto the 52-week placement grid", () => {
    const doc = toScenarioDoc({ ...DEFAULT_EDITOR, stopYear: 4, horizonYears: 7 });
    expect(doc.programs[0].end_day).toBe(4 * PLACEMENT_YEAR_DAYS);
  });

  it("round-trips through fromScenarioDoc", () => {
    const state = { ...DEFAULT_EDITOR, intensity: 75, stopYear: 2, horizonYears: 6 };
    expect(fromScenarioDoc(toScenarioDoc(state))).toEqual(state);
  });
});

describe("validateEditor", () => {
  it("accepts the default", () => {
    expect(validateEditor(DEFAULT_EDITOR)).toBeNull();
  });
  it("rejects stop year outside the horizon", () => {
    expect(validateEditor({ ...DEFAULT_EDITOR, stopYear: 5 })).toMatch(/stop year/);
  });
  it("rejects unsupported weekly frequency", () => {
    expect(validateEditor({ ...DEFAULT_EDITOR, sessionsPerWeek: 9 })).toMatch(/sessions/);
  });
});

describe("scenarioKey", () => {
  it("is stable for equal documents and distinct otherwise", () => {
    const a = scenarioKey(toScenarioDoc(DEFAULT_EDITOR));
    const b = scenarioKey(toScenarioDoc({ ...DEFAULT_EDITOR }));
    const c = scenarioKey(toScenarioDoc({ ...DEFAULT_EDITOR, intensity: 60 }));
    expect(a).toBe(b);
    expect(a).not.toBe(c);
  });
});

describe("describeScenario", () => {
  it("names dose, frequency and decay", () => {
    const text = describeScenario({ ...DEFAULT_EDITOR, sessionsPerWeek: 14, stopYear: 6 });
    expect(text).toContain("u=50%");
    expect(text).toContain("2×/day");
    expect(text).toContain("stop y6");
  });
});
