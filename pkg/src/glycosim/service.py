"""Minimal HTTP service exposing simulation and the paper presets.

Stateless: every request integrates from the standard initial state with the
packaged (or GLYCOSIM_PARAMS) parameters; identical bodies yield identical
responses. A bounded worker pool caps concurrent integrations; excess
requests queue in FIFO order on the pool.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor

import anyio
import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, ConfigDict, Field

from . import metrics
from .engine import IntegrationError, SolverConfig
from .metrics import lttb_indices, summarize
from .model import STATE_NAMES, initial_state
from .params import MINUTES_PER_DAY, ModelParams, load_params
from .scenarios import PRESETS, ProgramError, SweepSpec, build_schedule, run_sweep
from .schema import ScenarioDoc, scenario_to_doc
from . import engine

MAX_TRAJECTORY_POINTS = 5000
DEFAULT_WORKERS = 4


class SweepRequestDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: ScenarioDoc = Field(default_factory=ScenarioDoc)
    axes: dict[str, list[float]]
    anchors: list[float] = Field(default_factory=list)


def _run_scenario(doc: ScenarioDoc, params: ModelParams) -> dict:
    sc = doc.to_scenario()
    p = params if params.decay.tau_SI == sc.tau_SI else \
        params.replace_path("decay.tau_SI", sc.tau_SI)
    if doc.decay.S_I_initial != p.decay.S_I_initial:
        p = p.replace_path("decay.S_I_initial", doc.decay.S_I_initial)
    if doc.decay.S_I_target != p.decay.S_I_target:
        p = p.replace_path("decay.S_I_target", doc.decay.S_I_target)
    cfg = SolverConfig(mode=sc.solver, sample_interval=sc.sample_interval_min)
    schedule = build_schedule(sc.programs, sc.horizon_years)
    traj = engine.integrate(initial_state(p), schedule, p, cfg)

    # decimate on basal glucose, the primary display series
    keep = lttb_indices(traj.times_min, traj.field("G"), MAX_TRAJECTORY_POINTS)
    t_days = traj.t_days[keep]
    fields = {name: traj.states[keep, STATE_NAMES.index(name)].tolist()
              for name in STATE_NAMES}
    summary = summarize(traj, p)
    ttd = summary.time_to_diabetes_days
    return {
        "t_days": t_days.tolist(),
        "fields": fields,
        "events": [{"t_days": t / MINUTES_PER_DAY, "kind": kind, "intensity": u}
                   for t, kind, u in traj.events],
        "metrics": summary.to_dict(),
        "baseline_si": [float(v) for v in
                        (p.decay.S_I_target
                         + (p.decay.S_I_initial - p.decay.S_I_target)
                         * np.exp(-t_days / p.decay.tau_SI))],
        "diabetic_threshold": p.diabetic_threshold,
        "time_to_diabetes_days": ttd,
        "n_points": len(t_days),
    }


def create_app(params: ModelParams | None = None,
               workers: int = DEFAULT_WORKERS) -> FastAPI:
    if params is None:
        params = load_params(os.environ.get("GLYCOSIM_PARAMS"))
    app = FastAPI(title="glycosim service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("GLYCOSIM_UI_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    pool = ThreadPoolExecutor(max_workers=workers)

    async def in_pool(fn, *args):
        return await anyio.to_thread.run_sync(fn, *args, limiter=limiter)

    limiter = anyio.CapacityLimiter(workers)

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/presets")
    async def presets():
        out = {}
        for name, factory in PRESETS.items():
            spec = factory()
            out[name] = {
                "name": name,
                "anchor_years": list(spec.anchor_years),
                "scenarios": [
                    {"labels": labels,
                     "scenario": json.loads(scenario_to_doc(sc).model_dump_json())}
                    for labels, sc in spec.scenarios
                ],
            }
        return out

    @app.post("/simulate")
    async def simulate(doc: ScenarioDoc):
        try:
            return await in_pool(_run_scenario, doc, params)
        except (ProgramError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except IntegrationError as exc:
            raise HTTPException(
                status_code=422,
                detail={"error": str(exc),
                        "t_days": exc.t_min / MINUTES_PER_DAY})

    @app.post("/sweep")
    async def sweep(req: SweepRequestDoc):
        import itertools

        paths = list(req.axes.keys())
        if not paths:
            raise HTTPException(status_code=400, detail="axes must be non-empty")
        combos = list(itertools.product(*[req.axes[p] for p in paths]))
        scenarios = []
        try:
            for combo in combos:
                doc = ScenarioDoc(**json.loads(req.base.model_dump_json()))
                labels = {}
                for path, value in zip(paths, combo):
                    labels[path] = value
                    if path == "tau_SI":
                        doc.decay.tau_SI = float(value)
                    elif path == "horizon_years":
                        doc.horizon_years = float(value)
                    elif path in ("intensity_u", "minutes_per_session",
                                  "sessions_per_week"):
                        if not doc.programs:
                            from .schema import ProgramDoc
                            doc.programs = [ProgramDoc()]
                        setattr(doc.programs[0], path,
                                int(value) if path == "sessions_per_week" else float(value))
                    else:
                        raise ProgramError(f"unknown sweep axis: {path}")
                scenarios.append((labels, doc.to_scenario()))
        except (ProgramError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        anchors = tuple(req.anchors) if req.anchors else (req.base.horizon_years,)
        spec = SweepSpec("service", scenarios, anchors)

        async def stream():
            # chunked progress: one JSON line per completed cell
            for labels, sc in spec.scenarios:
                cell = await in_pool(
                    lambda l=labels, s=sc: run_sweep(
                        SweepSpec("one", [(l, s)], anchors), params)[0])
                entry = {"labels": cell.labels, "done": True}
                if cell.metrics is None:
                    entry["error"] = cell.error
                else:
                    entry["metrics"] = cell.metrics.to_dict()
                yield json.dumps(entry) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    return app


def main() -> None:
    import argparse

    import uvicorn

    ap = argparse.ArgumentParser(prog="glycosim-service")
    ap.add_argument("--host", default=os.environ.get("GLYCOSIM_HOST", "127.0.0.1"))
    ap.add_argument("--port", type=int,
                    default=int(os.environ.get("GLYCOSIM_PORT", "8077")))
    ap.add_argument("--params", default=None)
    ap.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    args = ap.parse_args()
    params = load_params(args.params or os.environ.get("GLYCOSIM_PARAMS"))
    engine.warmup()
    uvicorn.run(create_app(params, workers=args.workers),
                host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
