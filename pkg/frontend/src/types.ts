/** Wire types mirroring the simulation service JSON API. */

export interface ProgramDoc {
  sessions_per_week: number;
  minutes_per_session: number;
  intensity_u: number;
  start_day: number;
  end_day: number | null;
}

export interface DecayDoc {
  S_I_initial: number;
  S_I_target: number;
  tau_SI: number; // days
}

export interface ScenarioDoc {
  programs: ProgramDoc[];
  decay: DecayDoc;
  horizon_years: number;
  solver: "hybrid" | "reference";
  sample_interval_min: number;
}

export interface SummaryMetricsDoc {
  G_at: Record<string, number>;
  I_at: Record<string, number>;
  si_improvement_pct_at: Record<string, number>;
  time_to_diabetes_days: number | null;
  vl_peak: number;
  final_G_slope_per_year: number;
}

export interface EventDoc {
  t_days: number;
  kind: "session_start" | "session_end";
  intensity: number;
}

export interface SimulateResponse {
  t_days: number[];
  fields: Record<string, number[]>;
  events: EventDoc[];
  metrics: SummaryMetricsDoc;
  baseline_si: number[];
  diabetic_threshold: number;
  time_to_diabetes_days: number | null;
  n_points: number;
}

export interface PresetScenarioEntry {
  labels: Record<string, number | string>;
  scenario: ScenarioDoc;
}

export interface PresetDoc {
  name: string;
  anchor_years: number[];
  scenarios: PresetScenarioEntry[];
}

export type PresetsResponse = Record<string, PresetDoc>;
