"""Timescale engine: event schedules, solver configuration, and integration.

Two modes share one Dormand-Prince 5(4) core. `reference` brute-forces the
full 12-state system over the whole horizon with the fast step cap applied
everywhere; `hybrid` integrates the full system only inside session windows
(plus a short guard while the fast insulin/glucose transients re-slave), lets
the five fast perturbation states follow their exact exponential decays
through the washout, zeroes them at the washout cap, and integrates the slow
subsystem elsewhere. Hybrid is the production mode; reference is the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernel
from .model import FAST_IDX, N_STATES, STATE_NAMES, PhysioState
from .params import MINUTES_PER_DAY, ModelParams

WASHOUT_CAP_MIN = _kernel.WASHOUT_CAP_MIN
# full-system guard after session end: the fast insulin rebound re-slaves
# within a few clearance times, after which quasi-static reconstruction holds
GUARD_MIN = 20.0


class ScheduleError(ValueError):
    """Malformed event schedule."""


class IntegrationError(RuntimeError):
    """Integration failed; carries the failure time in minutes."""

    def __init__(self, message: str, t_min: float):
        super().__init__(f"{message} at t = {t_min / MINUTES_PER_DAY:.3f} days")
        self.t_min = t_min


@dataclass
class EventSchedule:
    """Ordered, non-overlapping exercise sessions over a finite horizon."""

    sessions: list[tuple[float, float, float]]  # (start_min, end_min, intensity %)
    horizon_end: float                          # min

    def __post_init__(self):
        if self.horizon_end <= 0.0:
            raise ScheduleError("horizon_end must be > 0")
        prev_end = 0.0
        cleaned = []
        for start, end, u in self.sessions:
            if end == start:
                continue  # zero-duration sessions are legal no-ops
            if end < start:
                raise ScheduleError(f"session ends before it starts: {start}..{end}")
            if start < prev_end:
                raise ScheduleError(f"sessions overlap or are unsorted near t = {start} min")
            if start < 0.0 or end > self.horizon_end:
                raise ScheduleError("session outside [0, horizon_end]")
            if not (0.0 < u <= 100.0):
                raise ScheduleError(f"intensity must lie in (0, 100], got {u}")
            cleaned.append((float(start), float(end), float(u)))
            prev_end = end
        self.sessions = cleaned


@dataclass
class SolverConfig:
    """Integration mode and tolerances.

    `max_step_fast` caps every step of the reference mode's single full-system
    pass (1 min resolves the 1.25 min oxygen-uptake time constant);
    `max_step_slow` caps hybrid-mode steps, whose sizes are otherwise left to
    the error controller.
    """

    mode: str = "hybrid"            # "reference" | "hybrid"
    rel_tol: float = 1e-6
    abs_tol: float = 1e-9
    max_step_fast: float = 1.0      # min
    max_step_slow: float = 1440.0   # min
    washout_threshold: float = 1e-6  # relative to within-session peaks
    sample_interval: float = 1440.0  # min

    def validate(self) -> None:
        if self.mode not in ("reference", "hybrid"):
            raise ValueError(f"unknown solver mode: {self.mode!r}")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be > 0")
        if self.max_step_fast <= 0.0 or self.max_step_fast > self.max_step_slow:
            raise ValueError("require 0 < max_step_fast <= max_step_slow")
        if not (0.0 < self.washout_threshold <= 1e-3):
            raise ValueError("washout_threshold must lie in (0, 1e-3]")
        if self.sample_interval <= 0.0:
            raise ValueError("sample_interval must be > 0")


@dataclass
class Trajectory:
    """Time-indexed state samples plus session event markers. Immutable."""

    times_min: np.ndarray                      # strictly increasing
    states: np.ndarray                         # (n_samples, 12)
    events: tuple = ()                         # (t_min, kind, intensity)
    n_steps: int = 0

    def __post_init__(self):
        self.times_min = np.asarray(self.times_min, dtype=np.float64)
        self.states = np.asarray(self.states, dtype=np.float64)
        if np.any(np.diff(self.times_min) <= 0.0):
            raise ValueError("trajectory times must be strictly increasing")
        self.times_min.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def t_days(self) -> np.ndarray:
        return self.times_min / MINUTES_PER_DAY

    def field(self, name: str) -> np.ndarray:
        return self.states[:, STATE_NAMES.index(name)]

    def final_state(self) -> PhysioState:
        return PhysioState.from_array(self.states[-1])

    def __len__(self) -> int:
        return len(self.times_min)


def _sample_times(schedule: EventSchedule, interval: float) -> np.ndarray:
    n = int(np.floor(schedule.horizon_end / interval + 1e-9))
    ts = [i * interval for i in range(n + 1)]
    if ts[-1] < schedule.horizon_end:
        ts.append(schedule.horizon_end)
    for start, end, _ in schedule.sessions:
        ts.append(start)
        ts.append(end)
    arr = np.unique(np.asarray(ts, dtype=np.float64))
    return arr[arr <= schedule.horizon_end + 1e-9]


def _segments_reference(schedule: EventSchedule):
    bounds = {0.0, schedule.horizon_end}
    for s, e, _ in schedule.sessions:
        bounds.add(s)
        bounds.add(e)
    bs = sorted(bounds)
    t0s, t1s, us, kinds, zeros = [], [], [], [], []
    for a, b in zip(bs[:-1], bs[1:]):
        u = 0.0
        for s, e, su in schedule.sessions:
            if s <= a and b <= e:
                u = su
                break
        t0s.append(a)
        t1s.append(b)
        us.append(u)
        kinds.append(_kernel.SEG_FULL)
        zeros.append(0)
    return t0s, t1s, us, kinds, zeros


def _segments_hybrid(schedule: EventSchedule, params: ModelParams, cfg: SolverConfig,
                     sample_t: np.ndarray):
    wo_dur = _kernel.washout_duration(params, cfg.washout_threshold)
    t0s, t1s, us, kinds, zeros = [], [], [], [], []

    def add(t0, t1, u, kind, zero):
        if t1 > t0:
            t0s.append(t0)
            t1s.append(t1)
            us.append(u)
            kinds.append(kind)
            zeros.append(zero)

    t = 0.0
    sessions = schedule.sessions
    horizon = schedule.horizon_end
    for i, (start, end, u) in enumerate(sessions):
        add(t, start, 0.0, _kernel.SEG_SLOW, 0)
        next_start = sessions[i + 1][0] if i + 1 < len(sessions) else horizon
        relax_end = min(end + wo_dur, next_start, horizon)
        guard_end = min(end + GUARD_MIN, next_start, horizon)
        # keep the full system wherever a sample would land inside the
        # washout: sampled values then never see reconstruction error
        lo = np.searchsorted(sample_t, guard_end, side="right")
        hi = np.searchsorted(sample_t, relax_end, side="left")
        if hi > lo:
            guard_end = min(max(guard_end, float(sample_t[hi - 1])), relax_end)
        add(start, end, u, _kernel.SEG_FULL, 0)
        add(end, guard_end, 0.0, _kernel.SEG_FULL, 0)
        # a washout truncated by the next session keeps its live fast states
        zero = 1 if relax_end == end + wo_dur or relax_end == horizon else 0
        add(guard_end, relax_end, 0.0, _kernel.SEG_RELAX, zero)
        if zero == 1 and relax_end <= guard_end:
            # washout fully covered by the full-system window: zero-length
            # relax marker tells the driver to zero the fast states here
            t0s.append(guard_end)
            t1s.append(guard_end)
            us.append(0.0)
            kinds.append(_kernel.SEG_RELAX)
            zeros.append(1)
        t = max(guard_end, relax_end)
    add(t, horizon, 0.0, _kernel.SEG_SLOW, 0)
    if not t0s:
        add(0.0, horizon, 0.0, _kernel.SEG_SLOW, 0)
    return t0s, t1s, us, kinds, zeros


def integrate(x0: PhysioState, schedule: EventSchedule, params: ModelParams,
              cfg: SolverConfig | None = None) -> Trajectory:
    """Integrate the full system over the schedule's horizon.

    Returns samples at `cfg.sample_interval` plus exact samples at every
    session boundary.
    """
    cfg = cfg or SolverConfig()
    cfg.validate()
    params.validate()
    x0.validate()

    p = _kernel.pack_params(params)
    sample_t = _sample_times(schedule, cfg.sample_interval)
    out = np.empty((len(sample_t), N_STATES), dtype=np.float64)

    if cfg.mode == "reference":
        t0s, t1s, us, kinds, zeros = _segments_reference(schedule)
        hmax = cfg.max_step_fast
    else:
        t0s, t1s, us, kinds, zeros = _segments_hybrid(schedule, params, cfg, sample_t)
        hmax = cfg.max_step_slow

    y = x0.to_array()
    status, t_err, n_steps = _kernel.run_schedule(
        p, y,
        np.asarray(t0s), np.asarray(t1s), np.asarray(us),
        np.asarray(kinds, dtype=np.int64), np.asarray(zeros, dtype=np.int64),
        cfg.rel_tol, cfg.abs_tol, hmax, sample_t, out,
    )
    if status == _kernel.ERR_STEP_UNDERFLOW:
        raise IntegrationError("step size underflow", t_err)
    if status == _kernel.ERR_NONFINITE:
        raise IntegrationError("non-finite state", t_err)

    events = []
    for s, e, u in schedule.sessions:
        events.append((s, "session_start", u))
        events.append((e, "session_end", u))
    return Trajectory(times_min=sample_t, states=out, events=tuple(events),
                      n_steps=int(n_steps))


def advance_linear_cascade(state: Sequence[float], u: float, dt: float,
                           il6_params) -> tuple[float, float, float]:
    """Closed-form advance of (PVO2max, IL6, Vl) under constant intensity."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    pvo, il6, vl = state
    return _kernel.cascade_closed_form(
        float(pvo), float(il6), float(vl), float(u), float(dt),
        il6_params.SR, il6_params.K_IL6, il6_params.k_s)


def detect_washout(x: PhysioState, peaks: Iterable[float], cfg: SolverConfig) -> bool:
    """True when every fast perturbation state sits below threshold * peak."""
    arr = x.to_array()
    for idx, peak in zip(FAST_IDX, peaks):
        if arr[idx] > cfg.washout_threshold * peak:
            return False
    return True


def step_once(x: PhysioState, t_min: float, h_min: float, u: float,
              params: ModelParams) -> PhysioState:
    """Single unconditional Dormand-Prince step (micro-scale smoke testing)."""
    p = _kernel.pack_params(params)
    y = _kernel.single_step(p, x.to_array(), t_min, h_min, u)
    return PhysioState.from_array(y)


def warmup() -> None:
    """Compile (or load from cache) the integration kernels."""
    _kernel.warmup()
