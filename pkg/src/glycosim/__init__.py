"""glycosim: two-timescale simulation of type-2-diabetes progression under
configurable physical-activity programs."""

from .engine import (
    EventSchedule,
    IntegrationError,
    ScheduleError,
    SolverConfig,
    Trajectory,
    advance_linear_cascade,
    detect_washout,
    integrate,
)
from .model import DomainError, PhysioState, baseline_si, derivative, initial_state
from .params import (
    ExerciseCouplingParams,
    HaParams,
    IL6Params,
    ModelParams,
    ParameterError,
    RoyParams,
    SensitivityDecayParams,
    load_params,
    save_params,
)

__version__ = "0.1.0"

__all__ = [
    "EventSchedule", "IntegrationError", "ScheduleError", "SolverConfig",
    "Trajectory", "advance_linear_cascade", "detect_washout", "integrate",
    "DomainError", "PhysioState", "baseline_si", "derivative", "initial_state",
    "ExerciseCouplingParams", "HaParams", "IL6Params", "ModelParams",
    "ParameterError", "RoyParams", "SensitivityDecayParams",
    "load_params", "save_params", "__version__",
]
