"""Model parameters, grouped by submodel, with strict JSON load/save.

Internally the simulator runs in minutes; every day-denominated constant
declared here is converted once when the engine packs parameters. The JSON
parameter file mirrors these field names and units exactly; unknown keys are
rejected.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

MINUTES_PER_DAY = 1440.0


class ParameterError(ValueError):
    """Raised for malformed parameter documents or invariant violations."""


@dataclass
class HaParams:
    """Slow glucose/insulin/beta-cell backbone constants.

    Rates are per day, concentrations in mg/dl (glucose) and uU/ml (insulin),
    beta-cell mass in mg, per-cell secretion in uU/ug/day.
    """

    R0: float = 864.0          # hepatic glucose appearance, mg/dl/day
    E_g0: float = 1.44         # insulin-independent clearance, 1/day
    V_g: float = 117.0         # glucose distribution volume, dl (total)
    W: float = 70.0            # body weight, kg
    V: float = 2500.0          # insulin distribution volume, ml
    k: float = 432.0           # insulin clearance, 1/day
    tau_beta: float = 62.0     # beta-cell mass time constant, days
    tau_gamma: float = 5.0     # secretion-shift time constant, days
    tau_sigma: float = 180.0   # secretory-capacity time constant, days
    # metabolic rate M(G), dimensionless Hill
    alpha_M: float = 150.0     # half-activation glucose, mg/dl
    k_M: float = 2.0
    # per-cell secretion ISR = sigma * Hill(M + gamma)
    alpha_ISR: float = 2.206422
    k_ISR: float = 2.0
    # proliferation P(ISR), dimensionless Hill
    alpha_P: float = 41.77     # uU/ug/day
    k_P: float = 6.0
    # apoptosis A(M), dimensionless Hill
    alpha_A: float = 0.51      # dimensionless metabolic rate
    k_A: float = 10.0
    # secretion-shift equilibrium gamma_inf(G)
    gamma_min: float = -0.05
    gamma_max: float = 0.40
    alpha_gamma: float = 174.6  # mg/dl
    k_gamma: float = 4.0
    # capacity equilibrium sigma_inf(ISR, M): workload up, glucotoxic down
    sigma_max: float = 700.0   # uU/ug/day
    alpha_up: float = 5.0      # uU/ug/day
    k_up: float = 2.0
    alpha_down: float = 0.55   # dimensionless metabolic rate
    k_down: float = 6.0

    def validate(self, prefix: str = "ha") -> None:
        positive = [
            "R0", "E_g0", "V_g", "W", "V", "k", "tau_beta", "tau_gamma",
            "tau_sigma", "alpha_M", "k_M", "alpha_ISR", "k_ISR", "alpha_P",
            "k_P", "alpha_A", "k_A", "alpha_gamma", "k_gamma", "sigma_max",
            "alpha_up", "k_up", "alpha_down", "k_down", "gamma_max",
        ]
        for name in positive:
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{prefix}.{name} must be > 0")
        if self.gamma_min >= self.gamma_max:
            raise ParameterError(f"{prefix}.gamma_min must be < {prefix}.gamma_max")


@dataclass
class RoyParams:
    """Rise/decay constants of the exercise perturbation states, per minute."""

    a1: float = 0.00158   # G_prod rise, mg/kg/min per PVO2max percent
    a2: float = 0.056     # G_prod decay, 1/min
    a3: float = 0.00195   # G_up rise, mg/kg/min per percent
    a4: float = 0.0485    # G_up decay, 1/min
    a5: float = 0.00125   # I_e rise, uU/ml/min per percent
    a6: float = 0.075     # I_e decay, 1/min

    def validate(self, prefix: str = "roy") -> None:
        for name in ("a1", "a2", "a3", "a4", "a5", "a6"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{prefix}.{name} must be > 0")


@dataclass
class IL6Params:
    """Exercise-driven interleukin-6 release and its cumulative exposure."""

    SR: float = 0.31      # IL-6 release gain, pg/ml per PVO2max percent per min
    K_IL6: float = 0.03   # IL-6 clearance, 1/min
    k_s: float = 1.55e-6  # cumulative-exposure decay, 1/min

    def validate(self, prefix: str = "il6") -> None:
        for name in ("SR", "K_IL6", "k_s"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{prefix}.{name} must be > 0")
        # closed-form cascade solution needs distinct decay rates
        pvo2_rate = 0.8
        if abs(self.K_IL6 - pvo2_rate) < 1e-9 or abs(self.k_s - pvo2_rate) < 1e-9:
            raise ParameterError(f"{prefix}: clearance rates must differ from 0.8/min")
        if abs(self.k_s - self.K_IL6) < 1e-12:
            raise ParameterError(f"{prefix}.k_s must differ from {prefix}.K_IL6")


@dataclass
class ExerciseCouplingParams:
    """Gains of the cumulative-exposure couplings onto beta cells and S_I."""

    zeta1: float = 1e-4     # proliferation gain, dimensionless
    zeta2: float = 1e-4     # apoptosis gain, dimensionless
    k_n: float = 1e6        # Hill half-saturation for beta-cell couplings, (pg/ml)*min
    zeta3: float = 1.4      # sensitivity-modifier gain, dimensionless
    k_n_si: float = 5e6     # half-saturation for sensitivity coupling, (pg/ml)*min

    def validate(self, prefix: str = "coupling") -> None:
        for name in ("zeta1", "zeta2", "k_n", "zeta3", "k_n_si"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{prefix}.{name} must be > 0")
        if not (0.0 < self.zeta1 < 1.0):
            raise ParameterError(f"{prefix}.zeta1 must lie in (0, 1)")
        if not (0.0 < self.zeta2 < 1.0):
            raise ParameterError(f"{prefix}.zeta2 must lie in (0, 1)")
        if self.zeta3 <= 1.0:
            raise ParameterError(f"{prefix}.zeta3 must be > 1 (drift sign reversal)")


@dataclass
class SensitivityDecayParams:
    """Unperturbed insulin-sensitivity decay toward the pathological target."""

    S_I_initial: float = 0.8   # value at t = 0
    S_I_target: float = 0.18   # asymptote of the unperturbed decay
    tau_SI: float = 150.0      # decay time constant, days

    def validate(self, prefix: str = "decay") -> None:
        if self.S_I_target <= 0.0:
            raise ParameterError(f"{prefix}.S_I_target must be > 0")
        if self.S_I_initial <= self.S_I_target:
            raise ParameterError(f"{prefix}.S_I_initial must exceed {prefix}.S_I_target")
        if self.tau_SI <= 0.0:
            raise ParameterError(f"{prefix}.tau_SI must be > 0")


@dataclass
class ModelParams:
    """All model constants, grouped by submodel."""

    ha: HaParams = field(default_factory=HaParams)
    roy: RoyParams = field(default_factory=RoyParams)
    il6: IL6Params = field(default_factory=IL6Params)
    coupling: ExerciseCouplingParams = field(default_factory=ExerciseCouplingParams)
    decay: SensitivityDecayParams = field(default_factory=SensitivityDecayParams)
    diabetic_threshold: float = 126.0  # mg/dl

    def validate(self) -> None:
        self.ha.validate()
        self.roy.validate()
        self.il6.validate()
        self.coupling.validate()
        self.decay.validate()
        if not (100.0 < self.diabetic_threshold < 200.0):
            raise ParameterError("diabetic_threshold must lie in (100, 200) mg/dl")
        # insulin reconstruction between sessions needs distinct rates
        if abs(self.ha.k / MINUTES_PER_DAY - self.roy.a6) < 1e-9:
            raise ParameterError("ha.k/1440 must differ from roy.a6")

    def copy(self) -> "ModelParams":
        return ModelParams(
            ha=dataclasses.replace(self.ha),
            roy=dataclasses.replace(self.roy),
            il6=dataclasses.replace(self.il6),
            coupling=dataclasses.replace(self.coupling),
            decay=dataclasses.replace(self.decay),
            diabetic_threshold=self.diabetic_threshold,
        )

    def replace_path(self, path: str, value: float) -> "ModelParams":
        """Return a copy with the dotted parameter `path` set to `value`."""
        out = self.copy()
        parts = path.split(".")
        target: Any = out
        for part in parts[:-1]:
            if not hasattr(target, part):
                raise ParameterError(f"unknown parameter path: {path!r}")
            target = getattr(target, part)
        leaf = parts[-1]
        if not hasattr(target, leaf) or not isinstance(getattr(target, leaf), float):
            raise ParameterError(f"unknown parameter path: {path!r}")
        setattr(target, leaf, float(value))
        out.validate()
        return out


_GROUPS = {
    "ha": HaParams,
    "roy": RoyParams,
    "il6": IL6Params,
    "coupling": ExerciseCouplingParams,
    "decay": SensitivityDecayParams,
}


def _load_group(cls: type, doc: dict, prefix: str) -> Any:
    known = {f.name for f in dataclasses.fields(cls)}
    out = cls()
    for key, value in doc.items():
        if key not in known:
            raise ParameterError(f"unknown parameter key: {prefix}.{key}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParameterError(f"parameter {prefix}.{key} must be a number")
        setattr(out, key, float(value))
    return out


def params_from_dict(doc: dict) -> ModelParams:
    """Build ModelParams from a parsed JSON document, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise ParameterError("parameter document must be a JSON object")
    out = ModelParams()
    for key, value in doc.items():
        if key in _GROUPS:
            if not isinstance(value, dict):
                raise ParameterError(f"parameter group {key} must be an object")
            setattr(out, key, _load_group(_GROUPS[key], value, key))
        elif key == "diabetic_threshold":
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError("parameter diabetic_threshold must be a number")
            out.diabetic_threshold = float(value)
        else:
            raise ParameterError(f"unknown parameter key: {key}")
    out.validate()
    return out


def params_to_dict(params: ModelParams) -> dict:
    return {
        "ha": dataclasses.asdict(params.ha),
        "roy": dataclasses.asdict(params.roy),
        "il6": dataclasses.asdict(params.il6),
        "coupling": dataclasses.asdict(params.coupling),
        "decay": dataclasses.asdict(params.decay),
        "diabetic_threshold": params.diabetic_threshold,
    }


def load_params(path: str | None = None) -> ModelParams:
    """Load parameters from a JSON file, or the packaged defaults if None."""
    if path is None:
        text = resources.files("glycosim.data").joinpath("default_params.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid parameter JSON: {exc}") from exc
    return params_from_dict(doc)


def save_params(params: ModelParams, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params_to_dict(params), fh, indent=2)
        fh.write("\n")
