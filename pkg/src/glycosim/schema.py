"""Scenario document schema shared by the CLI and the HTTP service.

One schema, two transports: the JSON accepted by `glycosim simulate
--scenario` is byte-for-byte the body of POST /simulate.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .scenarios import ExerciseProgram, Scenario

MAX_HORIZON_YEARS = 50.0


class ProgramDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sessions_per_week: int = Field(3, ge=0, le=14)
    minutes_per_session: float = Field(60.0, ge=0.0, le=720.0)
    intensity_u: float = Field(50.0, ge=0.0, le=100.0)
    start_day: float = Field(0.0, ge=0.0)
    end_day: float | None = Field(None, gt=0.0)

    def to_program(self) -> ExerciseProgram:
        return ExerciseProgram(
            sessions_per_week=self.sessions_per_week,
            minutes_per_session=self.minutes_per_session,
            intensity_u=self.intensity_u,
            start_day=self.start_day,
            end_day=self.end_day,
        )


class DecayDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    S_I_initial: float = Field(0.8, gt=0.0)
    S_I_target: float = Field(0.18, gt=0.0)
    tau_SI: float = Field(150.0, gt=0.0, description="days")

    @field_validator("S_I_target")
    @classmethod
    def _target_below_initial(cls, v, info):
        initial = info.data.get("S_I_initial", 0.8)
        if v >= initial:
            raise ValueError("S_I_target must be below S_I_initial")
        return v


class ScenarioDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    programs: list[ProgramDoc] = Field(default_factory=list)
    decay: DecayDoc = Field(default_factory=DecayDoc)
    horizon_years: float = Field(5.0, gt=0.0, le=MAX_HORIZON_YEARS)
    solver: Literal["hybrid", "reference"] = "hybrid"
    sample_interval_min: float = Field(1440.0, ge=1.0)

    def to_scenario(self) -> Scenario:
        return Scenario(
            programs=[p.to_program() for p in self.programs],
            tau_SI=self.decay.tau_SI,
            horizon_years=self.horizon_years,
            solver=self.solver,
            sample_interval_min=self.sample_interval_min,
        )


def scenario_to_doc(sc: Scenario) -> ScenarioDoc:
    return ScenarioDoc(
        programs=[ProgramDoc(
            sessions_per_week=p.sessions_per_week,
            minutes_per_session=p.minutes_per_session,
            intensity_u=p.intensity_u,
            start_day=p.start_day,
            end_day=p.end_day,
        ) for p in sc.programs],
        decay=DecayDoc(tau_SI=sc.tau_SI),
        horizon_years=sc.horizon_years,
        solver=sc.solver,  # type: ignore[arg-type]
        sample_interval_min=sc.sample_interval_min,
    )
