"""Command-line front door: simulate, sweep, presets, and calibration.

Exit codes: 0 success, 2 configuration error, 3 integration failure.
Identical invocations produce identical files; there is no randomness
anywhere in the pipeline (--seedless documents this and is accepted as a
no-op for explicitness).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import engine, metrics
from .engine import IntegrationError, SolverConfig
from .model import initial_state
from .params import ModelParams, ParameterError, load_params
from .scenarios import (
    PRESETS,
    CalibrationError,
    ProgramError,
    Scenario,
    build_schedule,
    calibrate_parameter,
    run_sweep,
)
from .schema import ScenarioDoc

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3

PARAMS_ENV = "GLYCOSIM_PARAMS"


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--tau-si", type=float, help="S_I decay constant, days")
    p.add_argument("--intensity", type=float, help="session intensity, %% of PVO2max")
    p.add_argument("--minutes-per-session", type=float)
    p.add_argument("--sessions-per-week", type=int)
    p.add_argument("--stop-year", type=float,
                   help="discontinue exercise at this year (de-training)")
    p.add_argument("--horizon-years", type=float)
    p.add_argument("--sample-interval-min", type=float)
    p.add_argument("--solver", choices=["reference", "hybrid"])


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--params", help=f"parameter JSON (default: ${PARAMS_ENV} or built-in)")
    p.add_argument("--out", help="output file path")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--seedless", action="store_true",
                   help="explicit marker; runs are deterministic by default")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="glycosim",
        description="Two-timescale simulator of T2D progression under exercise programs")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario, export the trajectory")
    _add_scenario_flags(sim)
    _common_flags(sim)
    sim.add_argument("--metrics-out", help="also write summary metrics (JSON)")

    sweep = sub.add_parser("sweep", help="run a sweep from a scenario axes file")
    sweep.add_argument("--spec", required=True,
                       help="JSON: {base: scenario, axes: {path: [values]}, anchors: [..]}")
    sweep.add_argument("--workers", type=int, default=1)
    _common_flags(sweep)

    pre = sub.add_parser("preset", help="run one of the paper presets")
    pre.add_argument("name", choices=sorted(PRESETS.keys()))
    pre.add_argument("--workers", type=int, default=2)
    _common_flags(pre)

    cal = sub.add_parser("calibrate", help="bisection on one parameter vs a target")
    cal.add_argument("--param-path", required=True,
                     help="dotted model-parameter path, e.g. coupling.zeta3")
    cal.add_argument("--target-metric", required=True,
                     choices=["G_at_year", "si_improvement_at_year"])
    cal.add_argument("--target-value", type=float, required=True)
    cal.add_argument("--at-year", type=float, default=5.0)
    cal.add_argument("--bracket", type=float, nargs=2, required=True)
    cal.add_argument("--tol", type=float,
                     help="default: 0.5 mg/dl for G, 1 percentage point for S_I")
    _add_scenario_flags(cal)
    _common_flags(cal)
    return ap


def _load_model_params(args) -> ModelParams:
    path = args.params or os.environ.get(PARAMS_ENV)
    return load_params(path)


def _scenario_from_args(args) -> Scenario:
    doc_fields: dict = {}
    if getattr(args, "scenario", None):
        with open(args.scenario, "r", encoding="utf-8") as fh:
            doc_fields = json.load(fh)
    doc = ScenarioDoc(**doc_fields)
    # flags override scenario-file fields
    if args.tau_si is not None:
        doc.decay.tau_SI = args.tau_si
    if args.horizon_years is not None:
        doc.horizon_years = args.horizon_years
    if args.solver is not None:
        doc.solver = args.solver
    if args.sample_interval_min is not None:
        doc.sample_interval_min = args.sample_interval_min
    prog_flags = [args.intensity, args.minutes_per_session, args.sessions_per_week,
                  getattr(args, "stop_year", None)]
    if any(v is not None for v in prog_flags):
        if not doc.programs:
            from .schema import ProgramDoc
            doc.programs = [ProgramDoc()]
        prog = doc.programs[0]
        if args.sessions_per_week is not None:
            prog.sessions_per_week = args.sessions_per_week
        if args.minutes_per_session is not None:
            prog.minutes_per_session = args.minutes_per_session
        if args.intensity is not None:
            prog.intensity_u = args.intensity
        if getattr(args, "stop_year", None) is not None:
            prog.end_day = args.stop_year * 364.0
        if prog.sessions_per_week == 0 or prog.minutes_per_session == 0.0 \
                or prog.intensity_u == 0.0:
            doc.programs = []
    return doc.to_scenario()


def _cmd_simulate(args) -> int:
    params = _load_model_params(args)
    sc = _scenario_from_args(args)
    p = params if params.decay.tau_SI == sc.tau_SI else \
        params.replace_path("decay.tau_SI", sc.tau_SI)
    cfg = SolverConfig(mode=sc.solver, sample_interval=sc.sample_interval_min)
    schedule = build_schedule(sc.programs, sc.horizon_years)
    traj = engine.integrate(initial_state(p), schedule, p, cfg)
    if args.out:
        if args.format == "csv":
            metrics.export_csv(traj, args.out)
        else:
            metrics.export_json(traj, args.out)
    if args.metrics_out:
        summary = metrics.summarize(traj, p)
        with open(args.metrics_out, "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, indent=1)
            fh.write("\n")
    if not args.quiet:
        g_end = traj.field("G")[-1]
        ttd = metrics.time_to_threshold(traj, p.diabetic_threshold)
        ttd_txt = f"{ttd / 365.0:.2f} y" if ttd is not None else "never"
        print(f"simulated {sc.horizon_years:g} y ({sc.solver}): "
              f"G(end) = {g_end:.1f} mg/dl, crossed {p.diabetic_threshold:g} mg/dl: {ttd_txt}")
    return EXIT_OK


def _cmd_preset(args) -> int:
    params = _load_model_params(args)
    spec = PRESETS[args.name]()
    t0 = time.perf_counter()
    cells = run_sweep(spec, params, workers=args.workers)
    elapsed = time.perf_counter() - t0
    if args.out:
        if args.format == "csv":
            metrics.export_metrics_csv(cells, args.out, spec.anchor_years)
        else:
            metrics.export_metrics_json(cells, args.out)
    if not args.quiet:
        n_err = sum(1 for c in cells if c.error)
        print(f"preset {args.name}: {len(cells)} runs in {elapsed:.1f} s"
              + (f", {n_err} failed" if n_err else ""))
    failed_all = all(c.error for c in cells)
    return EXIT_INTEGRATION if failed_all else EXIT_OK


def _cmd_sweep(args) -> int:
    params = _load_model_params(args)
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec_doc = json.load(fh)
    if not isinstance(spec_doc, dict) or "axes" not in spec_doc:
        raise ParameterError("sweep spec must be an object with an 'axes' map")
    base = ScenarioDoc(**spec_doc.get("base", {}))
    axes = spec_doc["axes"]
    if not isinstance(axes, dict) or not axes:
        raise ParameterError("sweep axes must be a non-empty map of path -> values")
    anchors = tuple(spec_doc.get("anchors", [base.horizon_years]))

    import itertools

    from .scenarios import SweepSpec
    paths = list(axes.keys())
    combos = list(itertools.product(*[axes[p] for p in paths]))
    scenarios = []
    for combo in combos:
        doc = ScenarioDoc(**json.loads(base.model_dump_json()))
        labels = {}
        for path, value in zip(paths, combo):
            labels[path] = value
            if path == "tau_SI":
                doc.decay.tau_SI = float(value)
            elif path == "horizon_years":
                doc.horizon_years = float(value)
            elif path in ("intensity_u", "minutes_per_session", "sessions_per_week"):
                if not doc.programs:
                    from .schema import ProgramDoc
                    doc.programs = [ProgramDoc()]
                setattr(doc.programs[0], path,
                        int(value) if path == "sessions_per_week" else float(value))
            else:
                raise ParameterError(f"unknown sweep axis: {path}")
        scenarios.append((labels, doc.to_scenario()))
    spec = SweepSpec("custom", scenarios, anchors)
    cells = run_sweep(spec, params, workers=args.workers)
    if args.out:
        if args.format == "csv":
            metrics.export_metrics_csv(cells, args.out, anchors)
        else:
            metrics.export_metrics_json(cells, args.out)
    if not args.quiet:
        print(f"sweep: {len(cells)} runs")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    params = _load_model_params(args)
    sc = _scenario_from_args(args)

    if args.target_metric == "G_at_year":
        tol = args.tol if args.tol is not None else 0.5

        def metric_fn(traj, p):
            return metrics.value_at(traj, args.at_year * 365.0, "G")
    else:
        tol = args.tol if args.tol is not None else 1.0

        def metric_fn(traj, p):
            return metrics.si_improvement_pct(traj, p.decay, args.at_year * 365.0)

    value, achieved = calibrate_parameter(
        params, args.param_path, sc, metric_fn, args.target_value,
        (args.bracket[0], args.bracket[1]), tol)
    result = {"param_path": args.param_path, "value": value,
              "achieved_metric": achieved, "target": args.target_value}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=1)
            fh.write("\n")
    if not args.quiet:
        print(f"{args.param_path} = {value:.8g} (metric {achieved:.4f}, "
              f"target {args.target_value:g})")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches our config-error code
        return int(exc.code) if exc.code else EXIT_OK
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "preset":
            return _cmd_preset(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "calibrate":
            return _cmd_calibrate(args)
        return EXIT_CONFIG
    except (ParameterError, ProgramError, CalibrationError, FileNotFoundError,
            json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
