"""Trajectory post-processing: interpolation, threshold crossings, summary
metrics, and CSV/JSON export."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .engine import Trajectory
from .model import STATE_NAMES, baseline_si
from .params import MINUTES_PER_DAY, ModelParams, SensitivityDecayParams

CSV_COLUMNS = ("t_days", "G", "I", "beta", "gamma", "sigma", "S_I",
               "PVO2max", "G_prod", "G_up", "I_e", "IL6", "Vl")
_FMT = "%.9g"  # fixed 9-significant-digit numeric format


@dataclass
class SummaryMetrics:
    """Scalar trajectory summaries at anchor years."""

    G_at: dict[float, float] = field(default_factory=dict)       # year -> mg/dl
    I_at: dict[float, float] = field(default_factory=dict)       # year -> uU/ml
    si_improvement_pct_at: dict[float, float] = field(default_factory=dict)
    time_to_diabetes_days: float | None = None
    vl_peak: float = 0.0
    final_G_slope_per_year: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["G_at"] = {f"{k:g}": v for k, v in self.G_at.items()}
        d["I_at"] = {f"{k:g}": v for k, v in self.I_at.items()}
        d["si_improvement_pct_at"] = {f"{k:g}": v
                                      for k, v in self.si_improvement_pct_at.items()}
        return d


def value_at(traj: Trajectory, t_days: float, field_name: str) -> float:
    """Linear interpolation between samples; never extrapolates."""
    t = t_days * MINUTES_PER_DAY
    times = traj.times_min
    if t < times[0] - 1e-9 or t > times[-1] + 1e-9:
        raise ValueError(f"t = {t_days} days outside trajectory range")
    t = min(max(t, times[0]), times[-1])
    return float(np.interp(t, times, traj.field(field_name)))


def time_to_threshold(traj: Trajectory, threshold: float,
                      field_name: str = "G") -> float | None:
    """First interpolated crossing time in days, or None if never crossed."""
    vals = traj.field(field_name)
    times = traj.times_min
    if vals[0] >= threshold:
        return float(times[0] / MINUTES_PER_DAY)
    above = np.nonzero(vals >= threshold)[0]
    if len(above) == 0:
        return None
    i = above[0]
    t0, t1 = times[i - 1], times[i]
    v0, v1 = vals[i - 1], vals[i]
    t_cross = t0 + (threshold - v0) / (v1 - v0) * (t1 - t0)
    return float(t_cross / MINUTES_PER_DAY)


def si_improvement_pct(traj: Trajectory, decay: SensitivityDecayParams,
                       t_days: float) -> float:
    """Percent improvement of S_I over the unperturbed decay at time t."""
    si = value_at(traj, t_days, "S_I")
    base = baseline_si(t_days, decay)
    return 100.0 * (si - base) / base


def summarize(traj: Trajectory, params: ModelParams,
              anchor_years: Iterable[float] = (4.0, 5.0, 6.0, 7.0, 10.0, 15.0, 20.0),
              ) -> SummaryMetrics:
    """Anchor-year values, threshold crossing, S_I improvement, Vl peak."""
    horizon_years = traj.times_min[-1] / MINUTES_PER_DAY / 365.0
    out = SummaryMetrics()
    for yr in anchor_years:
        if yr * 365.0 * MINUTES_PER_DAY > traj.times_min[-1] + 1e-6:
            continue
        out.G_at[yr] = value_at(traj, yr * 365.0, "G")
        out.I_at[yr] = value_at(traj, yr * 365.0, "I")
        out.si_improvement_pct_at[yr] = si_improvement_pct(traj, params.decay,
                                                           yr * 365.0)
    out.time_to_diabetes_days = time_to_threshold(traj, params.diabetic_threshold)
    out.vl_peak = float(np.max(traj.field("Vl")))
    if len(traj) >= 2:
        dt_years = (traj.times_min[-1] - traj.times_min[-2]) / MINUTES_PER_DAY / 365.0
        if dt_years > 0:
            out.final_G_slope_per_year = float(
                (traj.field("G")[-1] - traj.field("G")[-2]) / dt_years)
    _ = horizon_years
    return out


def is_escalated(metrics: SummaryMetrics, anchor_year: float,
                 level: float = 150.0) -> bool:
    """Operationalized '>>150': at or beyond the level and still increasing."""
    g = metrics.G_at.get(anchor_year)
    if g is None:
        return False
    return g >= level and metrics.final_G_slope_per_year > 0.0 or g >= 2.0 * level


def export_csv(traj: Trajectory, path: str) -> None:
    """Fixed column order, 9 significant digits, newline-terminated rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        t_days = traj.t_days
        for i in range(len(traj)):
            row = [_FMT % t_days[i]]
            row += [_FMT % v for v in traj.states[i]]
            writer.writerow(row)


def import_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Re-parse an exported trajectory; returns (t_days, states)."""
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError("unexpected CSV header")
        rows = [[float(v) for v in row] for row in reader if row]
    arr = np.asarray(rows, dtype=np.float64)
    if arr.size == 0:
        return np.empty(0), np.empty((0, len(CSV_COLUMNS) - 1))
    return arr[:, 0], arr[:, 1:]


def export_json(traj: Trajectory, path: str) -> None:
    doc = {
        "t_days": [float(_FMT % v) for v in traj.t_days],
        "fields": {name: [float(_FMT % v) for v in traj.field(name)]
                   for name in STATE_NAMES},
        "events": [{"t_days": t / MINUTES_PER_DAY, "kind": kind, "intensity": u}
                   for t, kind, u in traj.events],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def export_metrics_csv(cells, path: str, anchor_years: Iterable[float]) -> None:
    """Long-form sweep table: one row per (cell, anchor)."""
    anchors = list(anchor_years)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        label_keys: list[str] = []
        for cell in cells:
            for k in cell.labels:
                if k not in label_keys:
                    label_keys.append(k)
        writer.writerow(label_keys + ["anchor_years", "G_mgdl", "I_uUml",
                                      "si_improvement_pct", "time_to_diabetes_days",
                                      "error"])
        for cell in cells:
            labels = [cell.labels.get(k, "") for k in label_keys]
            if cell.metrics is None:
                writer.writerow(labels + ["", "", "", "", "", cell.error or "failed"])
                continue
            for yr in anchors:
                if yr not in cell.metrics.G_at:
                    continue
                ttd = cell.metrics.time_to_diabetes_days
                writer.writerow(labels + [
                    _FMT % yr,
                    _FMT % cell.metrics.G_at[yr],
                    _FMT % cell.metrics.I_at[yr],
                    _FMT % cell.metrics.si_improvement_pct_at[yr],
                    (_FMT % ttd) if ttd is not None else "",
                    "",
                ])


def export_metrics_json(cells, path: str) -> None:
    doc = []
    for cell in cells:
        entry: dict = {"labels": cell.labels}
        if cell.metrics is None:
            entry["error"] = cell.error or "failed"
        else:
            entry["metrics"] = cell.metrics.to_dict()
        doc.append(entry)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def lttb_indices(x: np.ndarray, y: np.ndarray, n_out: int) -> np.ndarray:
    """Largest-triangle-three-buckets downsampling; returns kept indices."""
    n = len(x)
    if n_out >= n or n_out < 3:
        return np.arange(n)
    idx = np.empty(n_out, dtype=np.int64)
    idx[0] = 0
    idx[-1] = n - 1
    every = (n - 2) / (n_out - 2)
    a = 0
    for i in range(n_out - 2):
        lo = int(math.floor(i * every)) + 1
        hi = min(int(math.floor((i + 1) * every)) + 1, n - 1)
        nxt_lo = min(int(math.floor((i + 1) * every)) + 1, n - 1)
        nxt_hi = min(int(math.floor((i + 2) * every)) + 1, n)
        avg_x = np.mean(x[nxt_lo:nxt_hi]) if nxt_hi > nxt_lo else x[-1]
        avg_y = np.mean(y[nxt_lo:nxt_hi]) if nxt_hi > nxt_lo else y[-1]
        seg_x = x[lo:hi]
        seg_y = y[lo:hi]
        area = np.abs((x[a] - avg_x) * (seg_y - y[a]) - (x[a] - seg_x) * (avg_y - y[a]))
        a = lo + int(np.argmax(area)) if len(area) else lo
        idx[i + 1] = a
    return np.unique(idx)
