"""Submodel algebra: coupling functions, backbone pieces, full derivative."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glycosim import DomainError, ModelParams, PhysioState, baseline_si, derivative
from glycosim import initial_state
from glycosim.model import (
    apoptosis_base,
    apoptosis_rate_modified,
    beta_coupling_fraction,
    gamma_inf,
    insulin_secretion_rate,
    metabolic_rate,
    proliferation_base,
    proliferation_rate_modified,
    si_modifier,
)


@pytest.fixture()
def p():
    return ModelParams()


class TestBetaCouplingFraction:
    def test_zero_input(self, p):
        assert beta_coupling_fraction(0.0, p.coupling) == 0.0

    def test_half_saturation(self, p):
        assert beta_coupling_fraction(p.coupling.k_n, p.coupling) == pytest.approx(0.5)

    def test_direct_evaluation(self, p):
        # Vl = 2e6 with k_n = 1e6: 4/(1+4)
        assert beta_coupling_fraction(2e6, p.coupling) == pytest.approx(0.8)

    def test_rejects_negative(self, p):
        with pytest.raises(DomainError):
            beta_coupling_fraction(-1.0, p.coupling)

    @given(st.floats(min_value=0.0, max_value=1e12))
    @settings(max_examples=50, deadline=None)
    def test_range(self, vl):
        frac = beta_coupling_fraction(vl, ModelParams().coupling)
        assert 0.0 <= frac < 1.0

    def test_strictly_increasing(self, p):
        vls = np.logspace(0, 9, 40)
        vals = [beta_coupling_fraction(v, p.coupling) for v in vls]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestModifiedRates:
    def test_proliferation_identity_without_exposure(self, p):
        isr = 9.7
        assert proliferation_rate_modified(isr, 0.0, p.ha, p.coupling) == \
            pytest.approx(proliferation_base(isr, p.ha))

    def test_proliferation_half_saturation(self, p):
        isr = 9.7
        base = proliferation_base(isr, p.ha)
        got = proliferation_rate_modified(isr, p.coupling.k_n, p.ha, p.coupling)
        assert got == pytest.approx(base * (1.0 + 0.5e-4))

    def test_proliferation_saturation_bound(self, p):
        isr = 9.7
        base = proliferation_base(isr, p.ha)
        got = proliferation_rate_modified(isr, 1e15, p.ha, p.coupling)
        assert got == pytest.approx(base * (1.0 + 1e-4), rel=1e-9)

    def test_apoptosis_identity_and_bounds(self, p):
        m = 0.31
        base = apoptosis_base(m, p.ha)
        assert apoptosis_rate_modified(m, 0.0, p.ha, p.coupling) == pytest.approx(base)
        half = apoptosis_rate_modified(m, p.coupling.k_n, p.ha, p.coupling)
        assert half == pytest.approx(base * (1.0 - 0.5e-4))
        sat = apoptosis_rate_modified(m, 1e15, p.ha, p.coupling)
        assert sat == pytest.approx(base * (1.0 - 1e-4), rel=1e-9)
        assert sat <= base

    @given(st.floats(min_value=0.0, max_value=5e7),
           st.floats(min_value=0.0, max_value=5e7))
    @settings(max_examples=60, deadline=None)
    def test_coupling_monotonicity(self, vl_a, vl_b):
        # proliferation non-decreasing, apoptosis non-increasing in Vl
        p = ModelParams()
        lo, hi = sorted((vl_a, vl_b))
        assert proliferation_rate_modified(9.7, hi, p.ha, p.coupling) >= \
            proliferation_rate_modified(9.7, lo, p.ha, p.coupling)
        assert apoptosis_rate_modified(0.31, hi, p.ha, p.coupling) <= \
            apoptosis_rate_modified(0.31, lo, p.ha, p.coupling)


class TestSiModifier:
    def test_identity(self, p):
        assert si_modifier(0.0, p.coupling) == 1.0

    def test_half_saturation(self, p):
        # 1 - 1.4/2
        assert si_modifier(p.coupling.k_n_si, p.coupling) == pytest.approx(0.3)

    def test_zero_crossing(self, p):
        vl_star = p.coupling.k_n_si / (p.coupling.zeta3 - 1.0)
        assert vl_star == pytest.approx(1.25e7)
        assert si_modifier(vl_star, p.coupling) == pytest.approx(0.0, abs=1e-12)

    def test_asymptote(self, p):
        assert si_modifier(1e16, p.coupling) == pytest.approx(
            1.0 - p.coupling.zeta3, rel=1e-6)

    def test_strictly_decreasing(self, p):
        vls = np.linspace(0.0, 3e7, 50)
        vals = [si_modifier(v, p.coupling) for v in vls]
        assert all(b < a for a, b in zip(vals, vals[1:]))


class TestBaselineSi:
    def test_initial_value(self, p):
        assert baseline_si(0.0, p.decay) == pytest.approx(0.8)

    def test_asymptote(self, p):
        assert baseline_si(1e7, p.decay) == pytest.approx(0.18)

    def test_one_time_constant(self, p):
        expect = 0.18 + 0.62 * math.exp(-1.0)
        assert baseline_si(p.decay.tau_SI, p.decay) == pytest.approx(expect)
        assert expect == pytest.approx(0.408, abs=5e-4)


class TestBackbonePieces:
    def test_metabolic_rate_range(self, p):
        for g in (50.0, 100.0, 300.0, 600.0):
            m = metabolic_rate(g, p.ha)
            assert 0.0 < m < 1.0
        assert metabolic_rate(600.0, p.ha) > metabolic_rate(50.0, p.ha)

    def test_isr_increasing_in_G_and_sigma(self, p):
        gs = np.linspace(60.0, 400.0, 30)
        vals = [insulin_secretion_rate(g, 0.0, 536.67, p.ha) for g in gs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert insulin_secretion_rate(100.0, 0.0, 600.0, p.ha) > \
            insulin_secretion_rate(100.0, 0.0, 500.0, p.ha)

    def test_finite_nonnegative_on_domain(self, p):
        for g in np.linspace(50.0, 600.0, 23):
            m = metabolic_rate(g, p.ha)
            isr = insulin_secretion_rate(g, gamma_inf(g, p.ha), 536.67, p.ha)
            for v in (m, isr, proliferation_base(isr, p.ha), apoptosis_base(m, p.ha)):
                assert math.isfinite(v) and v >= 0.0

    def test_proliferation_increasing_in_isr(self, p):
        isrs = np.linspace(0.0, 80.0, 25)
        vals = [proliferation_base(x, p.ha) for x in isrs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestDerivative:
    def test_decoupled_baseline(self, p):
        x = initial_state(p)
        d = derivative(0.0, x, 0.0, p)
        for name in ("PVO2max", "G_prod", "G_up", "I_e", "IL6", "Vl"):
            assert getattr(d, name) == 0.0
        expect = -(x.S_I - p.decay.S_I_target) / (p.decay.tau_SI * 1440.0)
        assert d.S_I == pytest.approx(expect, rel=1e-12)

    def test_pvo2max_fixed_point(self, p):
        x = initial_state(p)
        x.PVO2max = 50.0
        d = derivative(0.0, x, 50.0, p)
        assert d.PVO2max == pytest.approx(0.0, abs=1e-12)

    def test_il6_fixed_point(self, p):
        x = initial_state(p)
        u = 50.0
        x.PVO2max = u
        x.IL6 = p.il6.SR * u / p.il6.K_IL6
        d = derivative(0.0, x, u, p)
        assert d.IL6 == pytest.approx(0.0, abs=1e-9)

    def test_rejects_out_of_range_intensity(self, p):
        with pytest.raises(DomainError):
            derivative(0.0, initial_state(p), 101.0, p)

    def test_rejects_invalid_state(self, p):
        x = initial_state(p)
        x.beta = -1.0
        with pytest.raises(DomainError):
            derivative(0.0, x, 0.0, p)

    def test_sign_reversal_above_threshold(self, p):
        # beyond Vl* the drift turns positive while S_I > target
        x = initial_state(p)
        x.Vl = 2e7
        d = derivative(0.0, x, 0.0, p)
        assert d.S_I > 0.0
        x.Vl = 1e6
        d = derivative(0.0, x, 0.0, p)
        assert d.S_I < 0.0

    def test_matches_kernel_rhs(self, p):
        from glycosim import _kernel
        rng = np.random.default_rng(7)
        packed = _kernel.pack_params(p)
        base = initial_state(p).to_array()
        for _ in range(20):
            arr = base * (1.0 + 0.4 * rng.uniform(-1.0, 1.0, 12))
            arr[3] = rng.uniform(-0.04, 0.4)
            u = rng.uniform(0.0, 100.0)
            d_ref = derivative(0.0, PhysioState.from_array(arr), u, p).to_array()
            out = np.empty(12)
            _kernel._rhs_full(0.0, arr, u, packed, out)
            np.testing.assert_allclose(out, d_ref, rtol=1e-12, atol=1e-300)


class TestPhysioState:
    def test_roundtrip(self):
        x = PhysioState(G=120.0, Vl=5e6)
        arr = x.to_array()
        assert PhysioState.from_array(arr) == x

    def test_validate_rejects_nonfinite(self):
        x = PhysioState(G=float("nan"))
        with pytest.raises(DomainError):
            x.validate()
