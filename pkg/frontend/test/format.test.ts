import { describe, expect, it } from "vitest";

import { nearestIndex, trainingSpans } from "../src/chart.js";
import { fmt, fmtEscalated, fmtYears, niceTicks } from "../src/format.js";
import type { EventDoc } from "../src/types.js";

describe("fmt", () => {
  it("formats numbers and placeholders", () => {
    expect(fmt(126.04)).toBe("126.0");
    expect(fmt(null)).toBe("—");
    expect(fmt(Number.NaN)).toBe("—");
  });
});

describe("fmtYears", () => {
  it("converts days and handles never", () => {
    expect(fmtYears(730)).toBe("2.00 y");
    expect(fmtYears(null)).toBe("never");
  });
});

describe("fmtEscalated", () => {
  it("prints the escalation marker only while rising past 150", () => {
    expect(fmtEscalated(180, true)).toBe("≫150");
    expect(fmtEscalated(180, false)).toBe("180");
    expect(fmtEscalated(120, true)).toBe("120");
  });
});

describe("niceTicks", () => {
  it("spans the range with round steps", () => {
    const ticks = niceTicks(0, 100, 5);
    expect(ticks[0]).toBe(0);
    expect(ticks[ticks.length - 1]).toBe(100);
    expect(ticks).toContain(20);
  });
  it("degenerates gracefully", () => {
    expect(niceTicks(5, 5)).toEqual([5]);
  });
});

describe("nearestIndex", () => {
  it("finds the closest sample", () => {
    const xs = [0, 1, 2, 5, 10];
    expect(nearestIndex(xs, 1.4)).toBe(1);
    expect(nearestIndex(xs, 4)).toBe(3);
    expect(nearestIndex(xs, 99)).toBe(4);
  });
});

describe("trainingSpans", () => {
  const ev = (kind: "session_start" | "session_end", t: number): EventDoc => ({
    kind, t_days: t, intensity: 50,
  });

  it("merges weekly sessions into one span", () => {
    const events: EventDoc[] = [];
    for (let d = 0; d < 28; d += 7) {
      events.push(ev("session_start", d), ev("session_end", d + 0.04));
    }
    const spans = trainingSpans(events);
    expect(spans).toHaveLength(1);
    expect(spans[0][0]).toBeCloseTo(0);
    expect(spans[0][1]).toBeCloseTo(21.04 / 365);
  });

  it("splits on a de-training gap", () => {
    const events: EventDoc[] = [
      ev("session_start", 0), ev("session_end", 0.04),
      ev("session_start", 7), ev("session_end", 7.04),
      ev("session_start", 400), ev("session_end", 400.04),
    ];
    expect(trainingSpans(events)).toHaveLength(2);
  });

  it("handles empty schedules", () => {
    expect(trainingSpans([])).toEqual([]);
  });
});
