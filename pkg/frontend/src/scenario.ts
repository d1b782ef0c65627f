/** Editor state and its mapping to the service scenario document. */

import type { ProgramDoc, ScenarioDoc } from "./types.js";

export const PLACEMENT_YEAR_DAYS = 364; // session placement runs on 52-week years

export interface EditorState {
  intensity: number;          // % of PVO2max reserve, 0..100
  minutesPerSession: number;
  sessionsPerWeek: number;    // 0..7, or 14 for twice daily
  tauSI: number;              // days
  horizonYears: number;
  stopYear: number | null;    // de-training year, null = keep training
}

export const DEFAULT_EDITOR: EditorState = {
  intensity: 50,
  minutesPerSession: 60,
  sessionsPerWeek: 3,
  tauSI: 150,
  horizonYears: 5,
  stopYear: null,
};

export function validateEditor(s: EditorState): string | null {
  if (s.intensity < 0 || s.intensity > 100) return "intensity must lie in 0..100 %";
  if (s.minutesPerSession < 0 || s.minutesPerSession > 720)
    return "session length must lie in 0..720 min";
  if (![0, 1, 2, 3, 4, 5, 6, 7, 14].includes(s.sessionsPerWeek))
    return "sessions/week must be 0..7 or 14";
  if (s.tauSI <= 0) return "tau_SI must be positive";
  if (s.horizonYears <= 0 || s.horizonYears > 50)
    return "horizon must lie in (0, 50] years";
  if (s.stopYear !== null && (s.stopYear <= 0 || s.stopYear >= s.horizonYears))
    return "stop year must fall inside the horizon";
  return null;
}

export function toScenarioDoc(s: EditorState): ScenarioDoc {
  const programs: ProgramDoc[] = [];
  const active =
    s.intensity > 0 && s.minutesPerSession > 0 && s.sessionsPerWeek > 0;
  if (active) {
    programs.push({
      sessions_per_week: s.sessionsPerWeek,
      minutes_per_session: s.minutesPerSession,
      intensity_u: s.intensity,
      start_day: 0,
      end_day: s.stopYear === null ? null : s.stopYear * PLACEMENT_YEAR_DAYS,
    });
  }
  return {
    programs,
    decay: { S_I_initial: 0.8, S_I_target: 0.18, tau_SI: s.tauSI },
    horizon_years: s.horizonYears,
    solver: "hybrid",
    sample_interval_min: 1440,
  };
}

export function fromScenarioDoc(doc: ScenarioDoc): EditorState {
  const prog = doc.programs[0];
  return {
    intensity: prog ? prog.intensity_u : 0,
    minutesPerSession: prog ? prog.minutes_per_session : 0,
    sessionsPerWeek: prog ? prog.sessions_per_week : 0,
    tauSI: doc.decay.tau_SI,
    horizonYears: doc.horizon_years,
    stopYear:
      prog && prog.end_day !== null ? prog.end_day / PLACEMENT_YEAR_DAYS : null,
  };
}

/** Stable content key; used to match responses to the emitting scenario. */
export function scenarioKey(doc: ScenarioDoc): string {
  const p = doc.programs[0];
  const parts = [
    p ? [p.sessions_per_week, p.minutes_per_session, p.intensity_u,
         p.start_day, p.end_day ?? "open"].join("/") : "none",
    doc.decay.tau_SI,
    doc.horizon_years,
    doc.solver,
    doc.sample_interval_min,
  ];
  return parts.join("|");
}

export function describeScenario(s: EditorState): string {
  if (s.sessionsPerWeek === 0 || s.intensity === 0 || s.minutesPerSession === 0) {
    return `no exercise, τ=${s.tauSI} d`;
  }
  const freq = s.sessionsPerWeek === 14 ? "2×/day" : `${s.sessionsPerWeek}×/wk`;
  const stop = s.stopYear === null ? "" : `, stop y${s.stopYear}`;
  return `u=${s.intensity}% ${freq} ${s.minutesPerSession} min, τ=${s.tauSI} d${stop}`;
}
