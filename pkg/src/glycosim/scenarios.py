"""Scenario lab: exercise programs, the four study presets, parameter sweeps,
and scalar calibration against simulation targets.

Calendar convention: sessions are placed on a 52-week/364-day year grid
(clean weekly periodicity); metric anchors use 365-day years. The sub-percent
discrepancy is far below the acceptance tolerances.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .engine import EventSchedule, IntegrationError, SolverConfig, Trajectory, integrate
from .metrics import SummaryMetrics, summarize
from .model import PhysioState, initial_state
from .params import MINUTES_PER_DAY, ModelParams

PLACEMENT_YEAR_DAYS = 364.0     # 52 whole weeks
ANCHOR_YEAR_DAYS = 365.0
SESSION_START_MIN = 480.0       # 08:00
SECOND_SESSION_MIN = 1200.0     # 20:00, 12 h after the first

# deterministic weekday patterns per weekly session count (0 = Monday)
_WEEKDAYS = {
    0: (),
    1: (0,),
    2: (0, 3),
    3: (0, 2, 4),
    4: (0, 1, 3, 4),
    5: (0, 1, 2, 3, 4),
    6: (0, 1, 2, 3, 4, 5),
    7: (0, 1, 2, 3, 4, 5, 6),
}


class ProgramError(ValueError):
    """Malformed exercise program."""


@dataclass
class ExerciseProgram:
    """Piecewise-constant weekly exercise pattern.

    Either give (sessions_per_week, minutes_per_session) or an explicit
    weekly_pattern of (weekday, start_minute_of_day, duration_min) tuples.
    14 sessions/week means two daily sessions 12 h apart.
    """

    sessions_per_week: int = 3
    minutes_per_session: float = 60.0
    intensity_u: float = 50.0
    start_day: float = 0.0
    end_day: float | None = None            # open-ended when None
    weekly_pattern: list[tuple[int, float, float]] | None = None

    def validate(self) -> None:
        if self.weekly_pattern is None:
            if self.sessions_per_week not in _WEEKDAYS and self.sessions_per_week != 14:
                raise ProgramError(
                    f"unsupported sessions_per_week: {self.sessions_per_week}")
            if self.sessions_per_week > 0 and self.minutes_per_session <= 0.0:
                raise ProgramError("minutes_per_session must be > 0 for a non-empty program")
            if self.minutes_per_session < 0.0:
                raise ProgramError("minutes_per_session must be >= 0")
        else:
            for wd, start, dur in self.weekly_pattern:
                if not (0 <= wd <= 6):
                    raise ProgramError("weekday must lie in 0..6")
                if not (0.0 <= start < 1440.0) or dur < 0.0 or start + dur > 1440.0:
                    raise ProgramError("session must fit within its day")
        if self.sessions_per_week > 0 or self.weekly_pattern:
            if not (0.0 < self.intensity_u <= 100.0):
                raise ProgramError("intensity_u must lie in (0, 100]")
        if self.start_day < 0.0:
            raise ProgramError("start_day must be >= 0")
        if self.end_day is not None and self.end_day <= self.start_day:
            raise ProgramError("end_day must exceed start_day")

    def week_slots(self) -> list[tuple[int, float, float]]:
        if self.weekly_pattern is not None:
            return sorted(self.weekly_pattern)
        if self.sessions_per_week == 14:
            return [(wd, s, self.minutes_per_session)
                    for wd in range(7)
                    for s in (SESSION_START_MIN, SECOND_SESSION_MIN)]
        return [(wd, SESSION_START_MIN, self.minutes_per_session)
                for wd in _WEEKDAYS[self.sessions_per_week]]


def build_schedule(programs: ExerciseProgram | Sequence[ExerciseProgram],
                   horizon_years: float,
                   sample_check: bool = True) -> EventSchedule:
    """Deterministically place program sessions over the horizon.

    Sessions fall on fixed weekdays of the 52-week placement grid and are
    truncated at each program's end_day.
    """
    if isinstance(programs, ExerciseProgram):
        programs = [programs]
    if horizon_years <= 0.0:
        raise ProgramError("horizon_years must be > 0")
    horizon_end = horizon_years * ANCHOR_YEAR_DAYS * MINUTES_PER_DAY
    placement_end_day = horizon_years * PLACEMENT_YEAR_DAYS

    sessions: list[tuple[float, float, float]] = []
    for prog in programs:
        prog.validate()
        if prog.start_day >= placement_end_day:
            raise ProgramError("program starts beyond the 52-week placement horizon")
        slots = prog.week_slots()
        if not slots:
            continue
        end_day = placement_end_day if prog.end_day is None else min(
            prog.end_day, placement_end_day)
        week = int(prog.start_day // 7)
        while week * 7 < end_day:
            for wd, start_min, dur in slots:
                day = week * 7 + wd
                if day < prog.start_day or day >= end_day:
                    continue
                if dur <= 0.0:
                    continue  # zero-duration sessions are legal no-ops
                t0 = day * MINUTES_PER_DAY + start_min
                t1 = t0 + dur
                if t1 > horizon_end:
                    continue
                sessions.append((t0, t1, prog.intensity_u))
            week += 1
    sessions.sort()
    for (a0, a1, _), (b0, _, _) in zip(sessions[:-1], sessions[1:]):
        if b0 < a1:
            raise ProgramError("programs produce overlapping sessions")
    return EventSchedule(sessions=sessions, horizon_end=horizon_end)


@dataclass
class Scenario:
    """One simulation case: programs + decay settings + horizon."""

    programs: list[ExerciseProgram] = field(default_factory=list)
    tau_SI: float = 150.0           # days
    horizon_years: float = 5.0
    solver: str = "hybrid"
    sample_interval_min: float = 1440.0

    def run(self, params: ModelParams, cfg: SolverConfig | None = None) -> Trajectory:
        p = params
        if p.decay.tau_SI != self.tau_SI:
            p = params.replace_path("decay.tau_SI", self.tau_SI)
        if cfg is None:
            cfg = SolverConfig(mode=self.solver,
                               sample_interval=self.sample_interval_min)
        schedule = build_schedule(self.programs, self.horizon_years)
        return integrate(initial_state(p), schedule, p, cfg)


@dataclass
class ScenarioPreset:
    name: str
    scenarios: list[tuple[dict, Scenario]]   # (axis labels, scenario)
    anchor_years: tuple[float, ...]

    def __post_init__(self):
        for _, sc in self.scenarios:
            if sc.horizon_years <= 0.0:
                raise ProgramError("preset horizon must be > 0")


@dataclass
class SweepSpec:
    """Cartesian sweep: named axis values label prebuilt scenarios."""

    name: str
    scenarios: list[tuple[dict, Scenario]]
    anchor_years: tuple[float, ...]

    def __post_init__(self):
        if not self.scenarios:
            raise ProgramError("sweep needs at least one scenario")


@dataclass
class SweepCell:
    labels: dict
    metrics: SummaryMetrics | None
    error: str | None = None


def _program(u: float, sessions_per_week: int, minutes: float,
             end_day: float | None = None) -> ExerciseProgram:
    return ExerciseProgram(sessions_per_week=sessions_per_week,
                           minutes_per_session=minutes,
                           intensity_u=u, end_day=end_day)


def preset_dose_response() -> SweepSpec:
    """3x60 min/week at u = 0..70 %, both decay constants, 20-year horizon.

    Five-year dose-response values are read at the 5 y anchor; the long-
    horizon table cells at 10/15/20 y.
    """
    scenarios = []
    for tau in (150.0, 180.0):
        for u in range(0, 80, 10):
            programs = [] if u == 0 else [_program(float(u), 3, 60.0)]
            scenarios.append((
                {"intensity_u": float(u), "tau_SI": tau},
                Scenario(programs=programs, tau_SI=tau, horizon_years=20.0),
            ))
    return SweepSpec("dose-response", scenarios, (5.0, 10.0, 15.0, 20.0))


def preset_who() -> SweepSpec:
    """WHO equivalence arms plus the moderate weekly-duration scan, tau=180."""
    arms = [("vigorous-75", 75.0, 75.0), ("moderate-150", 50.0, 150.0),
            ("moderate-300", 50.0, 300.0), ("moderate-350", 50.0, 350.0),
            ("moderate-400", 50.0, 400.0), ("moderate-450", 50.0, 450.0),
            ("moderate-500", 50.0, 500.0)]
    scenarios = []
    for name, u, weekly_min in arms:
        scenarios.append((
            {"arm": name, "intensity_u": u, "weekly_minutes": weekly_min},
            Scenario(programs=[_program(u, 3, weekly_min / 3.0)],
                     tau_SI=180.0, horizon_years=5.0),
        ))
    return SweepSpec("who", scenarios, (5.0,))


def preset_fdps() -> SweepSpec:
    """Daily 30-minute sessions, interrupted at year 4, 7-year horizon."""
    scenarios = []
    stop = 4.0 * PLACEMENT_YEAR_DAYS
    for u in (30.0, 40.0, 50.0):
        for tau in (150.0, 180.0):
            scenarios.append((
                {"intensity_u": u, "tau_SI": tau},
                Scenario(programs=[_program(u, 7, 30.0, end_day=stop)],
                         tau_SI=tau, horizon_years=7.0),
            ))
    return SweepSpec("fdps", scenarios, (4.0, 7.0))


def preset_cdqdps() -> SweepSpec:
    """Two 20-minute sessions per day, interrupted at year 6, 20-year horizon."""
    scenarios = []
    stop = 6.0 * PLACEMENT_YEAR_DAYS
    for u in (30.0, 40.0, 50.0):
        for tau in (150.0, 180.0):
            scenarios.append((
                {"intensity_u": u, "tau_SI": tau},
                Scenario(programs=[_program(u, 14, 20.0, end_day=stop)],
                         tau_SI=tau, horizon_years=20.0),
            ))
    return SweepSpec("cdqdps", scenarios, (6.0, 20.0))


PRESETS: dict[str, Callable[[], SweepSpec]] = {
    "dose-response": preset_dose_response,
    "who": preset_who,
    "fdps": preset_fdps,
    "cdqdps": preset_cdqdps,
}


def run_sweep(spec: SweepSpec, params: ModelParams,
              cfg: SolverConfig | None = None, workers: int = 1) -> list[SweepCell]:
    """Evaluate every sweep point; per-cell failures are recorded, not raised."""

    def run_one(item):
        labels, sc = item
        try:
            traj = sc.run(params, dataclasses.replace(cfg) if cfg else None)
            p = params if params.decay.tau_SI == sc.tau_SI else \
                params.replace_path("decay.tau_SI", sc.tau_SI)
            anchors = tuple(a for a in spec.anchor_years if a <= sc.horizon_years)
            return SweepCell(labels, summarize(traj, p, anchor_years=anchors))
        except (IntegrationError, ProgramError, ValueError) as exc:
            return SweepCell(labels, None, error=str(exc))

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_one, spec.scenarios))
    return [run_one(item) for item in spec.scenarios]


class CalibrationError(ValueError):
    """Bracket does not straddle the target or metric is not monotone."""


def calibrate_scalar(metric: Callable[[float], float], target_value: float,
                     bracket: tuple[float, float], tol: float,
                     max_iter: int = 60) -> tuple[float, float]:
    """Bisection on a monotone scalar map; returns (value, achieved metric).

    The endpoints are evaluated first to confirm the bracket straddles the
    target; an endpoint already within tolerance is returned directly.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise CalibrationError("bracket must satisfy lo < hi")
    f_lo = metric(lo)
    if abs(f_lo - target_value) <= tol:
        return lo, f_lo
    f_hi = metric(hi)
    if abs(f_hi - target_value) <= tol:
        return hi, f_hi
    if (f_lo - target_value) * (f_hi - target_value) > 0.0:
        raise CalibrationError(
            f"bracket [{lo}, {hi}] does not straddle target {target_value} "
            f"(metric endpoints {f_lo:.6g}, {f_hi:.6g})")
    increasing = f_hi > f_lo
    val = lo
    f_val = f_lo
    for _ in range(max_iter):
        val = 0.5 * (lo + hi)
        f_val = metric(val)
        if abs(f_val - target_value) <= tol:
            return val, f_val
        if (f_val > target_value) == increasing:
            hi = val
        else:
            lo = val
    return val, f_val


def calibrate_parameter(params: ModelParams, param_path: str, scenario: Scenario,
                        metric_fn: Callable[[Trajectory, ModelParams], float],
                        target_value: float, bracket: tuple[float, float],
                        tol: float, cfg: SolverConfig | None = None,
                        max_iter: int = 60) -> tuple[float, float]:
    """Bisection on a model parameter against a trajectory-derived metric."""

    def metric(v: float) -> float:
        p = params.replace_path(param_path, v)
        traj = scenario.run(p, dataclasses.replace(cfg) if cfg else None)
        p_run = p if p.decay.tau_SI == scenario.tau_SI else \
            p.replace_path("decay.tau_SI", scenario.tau_SI)
        return metric_fn(traj, p_run)

    return calibrate_scalar(metric, target_value, bracket, tol, max_iter)
