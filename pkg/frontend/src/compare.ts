/** Pinned-scenario comparison: anchor-year grid in the style of the
 * dose-response / prevention-study tables. */

import type { ScenarioDoc, SimulateResponse } from "./types.js";

export const MAX_PINS = 4;

export interface PinnedScenario {
  label: string;
  key: string;
  doc: ScenarioDoc;
  response: SimulateResponse;
}

export interface CompareRow {
  label: string;
  anchors: Record<string, { G: number | null; I: number | null }>;
  timeToDiabetesYears: number | null;
}

export class ComparePanel {
  pins: PinnedScenario[] = [];

  /** Pin a scenario; re-pinning the same key replaces its snapshot. */
  pin(entry: PinnedScenario): boolean {
    const existing = this.pins.findIndex((p) => p.key === entry.key);
    if (existing >= 0) {
      this.pins[existing] = entry;
      return true;
    }
    if (this.pins.length >= MAX_PINS) return false;
    this.pins.push(entry);
    return true;
  }

  unpin(key: string): void {
    this.pins = this.pins.filter((p) => p.key !== key);
  }

  clear(): void {
    this.pins = [];
  }

  /** Anchor years present in at least one pinned run, ascending. */
  anchorYears(): number[] {
    const years = new Set<number>();
    for (const p of this.pins) {
      for (const y of Object.keys(p.response.metrics.G_at)) years.add(Number(y));
    }
    return [...years].sort((a, b) => a - b);
  }

  rows(): CompareRow[] {
    const anchors = this.anchorYears();
    return this.pins.map((p) => {
      const row: CompareRow = {
        label: p.label,
        anchors: {},
        timeToDiabetesYears:
          p.response.metrics.time_to_diabetes_days === null
            ? null
            : p.response.metrics.time_to_diabetes_days / 365,
      };
      for (const y of anchors) {
        const k = String(y);
        row.anchors[k] = {
          G: p.response.metrics.G_at[k] ?? null,
          I: p.response.metrics.I_at[k] ?? null,
        };
      }
      return row;
    });
  }
}
