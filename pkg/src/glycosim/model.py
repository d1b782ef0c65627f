"""Physiology core: state variables, submodel algebra, and the full derivative.

Slow states (G, I, beta, gamma, sigma, S_I) carry day-scale dynamics; fast
states (PVO2max, G_prod, G_up, I_e, IL6) react within minutes of an exercise
session; Vl accumulates IL-6 exposure across months. All derivatives returned
here are per minute, the simulator's canonical time unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import (
    MINUTES_PER_DAY,
    ExerciseCouplingParams,
    HaParams,
    ModelParams,
    SensitivityDecayParams,
)


class DomainError(ValueError):
    """Input outside the model's physiological/mathematical domain."""


STATE_NAMES = (
    "G", "I", "beta", "gamma", "sigma", "S_I",
    "PVO2max", "G_prod", "G_up", "I_e", "IL6", "Vl",
)
N_STATES = len(STATE_NAMES)

# indices into the packed state vector
IDX_G, IDX_I, IDX_BETA, IDX_GAMMA, IDX_SIGMA, IDX_SI = 0, 1, 2, 3, 4, 5
IDX_PVO2, IDX_GPROD, IDX_GUP, IDX_IE, IDX_IL6, IDX_VL = 6, 7, 8, 9, 10, 11
FAST_IDX = (IDX_PVO2, IDX_GPROD, IDX_GUP, IDX_IE, IDX_IL6)
SLOW_IDX = (IDX_G, IDX_I, IDX_BETA, IDX_GAMMA, IDX_SIGMA, IDX_SI)


@dataclass
class PhysioState:
    """The 12 coupled state variables.

    Units: G mg/dl, I uU/ml, beta mg, gamma dimensionless, sigma uU/ug/day,
    S_I ml/uU/day, PVO2max percent, G_prod/G_up mg/kg/min, I_e uU/ml/min,
    IL6 pg/ml, Vl (pg/ml)*min.
    """

    G: float = 99.7604
    I: float = 9.025
    beta: float = 1000.423
    gamma: float = -0.00666
    sigma: float = 536.67
    S_I: float = 0.8
    PVO2max: float = 0.0
    G_prod: float = 0.0
    G_up: float = 0.0
    I_e: float = 0.0
    IL6: float = 0.0
    Vl: float = 0.0

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in STATE_NAMES], dtype=np.float64)

    @classmethod
    def from_array(cls, x: np.ndarray) -> "PhysioState":
        if len(x) != N_STATES:
            raise DomainError(f"state vector must have {N_STATES} entries")
        return cls(**{n: float(v) for n, v in zip(STATE_NAMES, x)})

    def validate(self) -> None:
        if not all(math.isfinite(getattr(self, n)) for n in STATE_NAMES):
            raise DomainError("state contains non-finite values")
        if self.G <= 0.0:
            raise DomainError("G must be > 0")
        for name in ("I", "beta", "PVO2max", "G_prod", "G_up", "I_e", "IL6", "Vl"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0")


def initial_state(params: ModelParams) -> PhysioState:
    """Pre-diabetic basal state; fast states relaxed at zero."""
    return PhysioState(S_I=params.decay.S_I_initial)


# ---------------------------------------------------------------------------
# backbone algebra
# ---------------------------------------------------------------------------

def metabolic_rate(G: float, ha: HaParams) -> float:
    """Dimensionless beta-cell metabolic rate, saturating Hill in glucose."""
    if G < 0.0:
        raise DomainError("G must be >= 0")
    gk = G ** ha.k_M
    return gk / (ha.alpha_M ** ha.k_M + gk)


def gamma_inf(G: float, ha: HaParams) -> float:
    """Equilibrium shift of the secretion curve under sustained glycemia."""
    if G < 0.0:
        raise DomainError("G must be >= 0")
    gk = G ** ha.k_gamma
    frac = gk / (ha.alpha_gamma ** ha.k_gamma + gk)
    return ha.gamma_min + (ha.gamma_max - ha.gamma_min) * frac


def insulin_secretion_rate(G: float, gamma: float, sigma: float, ha: HaParams) -> float:
    """Per-cell insulin secretion, uU/ug/day; increasing in G and sigma."""
    if sigma < 0.0:
        raise DomainError("sigma must be >= 0")
    y = metabolic_rate(G, ha) + gamma
    if y <= 0.0:
        return 0.0
    yk = y ** ha.k_ISR
    return sigma * yk / (ha.alpha_ISR ** ha.k_ISR + yk)


def sigma_inf(ISR: float, M: float, ha: HaParams) -> float:
    """Equilibrium secretory capacity: workload up-regulation, glucotoxic down."""
    if ISR < 0.0 or M < 0.0:
        raise DomainError("ISR and M must be >= 0")
    isr_k = ISR ** ha.k_up
    up = isr_k / (ha.alpha_up ** ha.k_up + isr_k)
    m_k = M ** ha.k_down
    down_k = ha.alpha_down ** ha.k_down
    down = down_k / (down_k + m_k)
    return ha.sigma_max * up * down


def proliferation_base(ISR: float, ha: HaParams) -> float:
    """Backbone beta-cell proliferation drive, dimensionless in [0, 1)."""
    if ISR < 0.0:
        raise DomainError("ISR must be >= 0")
    isr_k = ISR ** ha.k_P
    return isr_k / (ha.alpha_P ** ha.k_P + isr_k)


def apoptosis_base(M: float, ha: HaParams) -> float:
    """Backbone beta-cell apoptosis drive, dimensionless in [0, 1)."""
    if M < 0.0:
        raise DomainError("M must be >= 0")
    m_k = M ** ha.k_A
    return m_k / (ha.alpha_A ** ha.k_A + m_k)


# ---------------------------------------------------------------------------
# exercise couplings
# ---------------------------------------------------------------------------

def beta_coupling_fraction(Vl: float, coupling: ExerciseCouplingParams) -> float:
    """Hill (n=2) saturation of cumulative IL-6 exposure, in [0, 1)."""
    if Vl < 0.0:
        raise DomainError("Vl must be >= 0")
    v2 = Vl * Vl
    return v2 / (coupling.k_n * coupling.k_n + v2)


def proliferation_rate_modified(ISR: float, Vl: float, ha: HaParams,
                                coupling: ExerciseCouplingParams) -> float:
    return proliferation_base(ISR, ha) * (1.0 + coupling.zeta1 * beta_coupling_fraction(Vl, coupling))


def apoptosis_rate_modified(M: float, Vl: float, ha: HaParams,
                            coupling: ExerciseCouplingParams) -> float:
    return apoptosis_base(M, ha) * (1.0 - coupling.zeta2 * beta_coupling_fraction(Vl, coupling))


def si_modifier(Vl: float, coupling: ExerciseCouplingParams) -> float:
    """Michaelis-Menten drift modifier; crosses zero at k_n_si/(zeta3 - 1)."""
    if Vl < 0.0:
        raise DomainError("Vl must be >= 0")
    return 1.0 - coupling.zeta3 * Vl / (coupling.k_n_si + Vl)


def baseline_si(t_days: float, decay: SensitivityDecayParams) -> float:
    """Closed-form unperturbed S_I decay (the no-exercise reference curve)."""
    if t_days < 0.0:
        raise DomainError("t_days must be >= 0")
    span = decay.S_I_initial - decay.S_I_target
    return decay.S_I_target + span * math.exp(-t_days / decay.tau_SI)


# ---------------------------------------------------------------------------
# full derivative
# ---------------------------------------------------------------------------

def derivative(t_min: float, x: PhysioState, u: float, params: ModelParams) -> PhysioState:
    """Time derivative of the full state, per minute.

    `u` is exercise intensity in percent of PVO2max reserve, 0-100. Slow
    backbone terms are converted from per-day; the exercise perturbations and
    IL-6 cascade are native per-minute.
    """
    if not (0.0 <= u <= 100.0):
        raise DomainError("u must lie in [0, 100]")
    x.validate()
    ha, roy, il6, cpl, dec = params.ha, params.roy, params.il6, params.coupling, params.decay

    M = metabolic_rate(x.G, ha)
    ISR = insulin_secretion_rate(x.G, x.gamma, x.sigma, ha)
    P_mod = proliferation_rate_modified(ISR, x.Vl, ha, cpl)
    A_mod = apoptosis_rate_modified(M, x.Vl, ha, cpl)

    d_beta = (P_mod - A_mod) * x.beta / (ha.tau_beta * MINUTES_PER_DAY)
    d_si = -(x.S_I - dec.S_I_target) / (dec.tau_SI * MINUTES_PER_DAY) * si_modifier(x.Vl, cpl)

    d_pvo2 = -0.8 * x.PVO2max + 0.8 * u
    d_il6 = il6.SR * x.PVO2max - il6.K_IL6 * x.IL6
    d_vl = x.IL6 - il6.k_s * x.Vl

    # beta in mg, ISR per ug: the factor 1000 reconciles the mass units
    secretion = 1000.0 * x.beta / ha.V * ISR
    d_g = (ha.R0 - (ha.E_g0 + x.S_I * x.I) * x.G) / MINUTES_PER_DAY \
        + (ha.W / ha.V_g) * (x.G_prod - x.G_up)
    d_i = (secretion - ha.k * x.I) / MINUTES_PER_DAY - x.I_e
    d_gamma = (gamma_inf(x.G, ha) - x.gamma) / (ha.tau_gamma * MINUTES_PER_DAY)
    d_sigma = (sigma_inf(ISR, M, ha) - x.sigma) / (ha.tau_sigma * MINUTES_PER_DAY)

    d_gprod = roy.a1 * x.PVO2max - roy.a2 * x.G_prod
    d_gup = roy.a3 * x.PVO2max - roy.a4 * x.G_up
    d_ie = roy.a5 * x.PVO2max - roy.a6 * x.I_e

    return PhysioState(
        G=d_g, I=d_i, beta=d_beta, gamma=d_gamma, sigma=d_sigma, S_I=d_si,
        PVO2max=d_pvo2, G_prod=d_gprod, G_up=d_gup, I_e=d_ie, IL6=d_il6, Vl=d_vl,
    )
