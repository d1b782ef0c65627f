"""Trajectory post-processing and export."""

import numpy as np
import pytest

from glycosim import EventSchedule, ModelParams, SolverConfig, initial_state, integrate
from glycosim.engine import Trajectory
from glycosim.metrics import (
    CSV_COLUMNS,
    export_csv,
    export_json,
    import_csv,
    lttb_indices,
    si_improvement_pct,
    summarize,
    time_to_threshold,
    value_at,
)


def make_traj(t_days, g_values):
    n = len(t_days)
    states = np.zeros((n, 12))
    states[:, 0] = g_values
    states[:, 5] = 0.5
    return Trajectory(times_min=np.asarray(t_days, dtype=float) * 1440.0,
                      states=states)


class TestValueAt:
    def test_exact_sample(self):
        traj = make_traj([0.0, 1.0, 2.0], [100.0, 110.0, 120.0])
        assert value_at(traj, 1.0, "G") == 110.0

    def test_midpoint_is_mean(self):
        traj = make_traj([0.0, 2.0], [100.0, 120.0])
        assert value_at(traj, 1.0, "G") == pytest.approx(110.0)

    def test_never_extrapolates(self):
        traj = make_traj([0.0, 2.0], [100.0, 120.0])
        with pytest.raises(ValueError):
            value_at(traj, 3.0, "G")
        with pytest.raises(ValueError):
            value_at(traj, -0.5, "G")


class TestTimeToThreshold:
    def test_never_crossed(self):
        traj = make_traj([0.0, 1.0, 2.0], [100.0, 105.0, 110.0])
        assert time_to_threshold(traj, 126.0) is None

    def test_interpolated_crossing(self):
        traj = make_traj([0.0, 1.0, 2.0], [100.0, 120.0, 130.0])
        t = time_to_threshold(traj, 126.0)
        assert t == pytest.approx(1.6)

    def test_crossed_at_start(self):
        traj = make_traj([0.0, 1.0], [130.0, 140.0])
        assert time_to_threshold(traj, 126.0) == 0.0

    def test_monotone_under_domination(self):
        lo = make_traj([0.0, 1.0, 2.0], [100.0, 120.0, 130.0])
        hi = make_traj([0.0, 1.0, 2.0], [105.0, 125.0, 135.0])
        assert time_to_threshold(hi, 126.0) <= time_to_threshold(lo, 126.0)


class TestSiImprovement:
    def test_no_exercise_is_zero_everywhere(self, params):
        sch = EventSchedule(sessions=[], horizon_end=2 * 365 * 1440.0)
        traj = integrate(initial_state(params), sch, params, SolverConfig())
        for yr in (0.5, 1.0, 2.0):
            assert si_improvement_pct(traj, params.decay, yr * 365.0) == \
                pytest.approx(0.0, abs=0.05)


class TestCsvExport:
    def test_header_only_for_empty(self, tmp_path):
        traj = Trajectory(times_min=np.empty(0), states=np.empty((0, 12)))
        path = tmp_path / "empty.csv"
        export_csv(traj, str(path))
        lines = path.read_text().splitlines()
        assert lines == [",".join(CSV_COLUMNS)]

    def test_round_trip(self, params, tmp_path):
        sch = EventSchedule(sessions=[(480.0, 540.0, 50.0)],
                            horizon_end=7 * 1440.0)
        traj = integrate(initial_state(params), sch, params,
                         SolverConfig(sample_interval=720.0))
        path = tmp_path / "traj.csv"
        export_csv(traj, str(path))
        t_days, states = import_csv(str(path))
        # re-parse equals export at the stated 9-significant-digit precision
        np.testing.assert_allclose(t_days, traj.t_days, rtol=1e-8)
        np.testing.assert_allclose(states, traj.states, rtol=1e-8, atol=1e-12)
        reread = [float("%.9g" % v) for v in traj.states[:, 0]]
        np.testing.assert_array_equal(states[:, 0], reread)

    def test_column_order_fixed(self):
        assert CSV_COLUMNS == ("t_days", "G", "I", "beta", "gamma", "sigma",
                               "S_I", "PVO2max", "G_prod", "G_up", "I_e",
                               "IL6", "Vl")


class TestJsonExport:
    def test_fields_and_events(self, params, tmp_path):
        import json
        sch = EventSchedule(sessions=[(480.0, 540.0, 50.0)], horizon_end=2880.0)
        traj = integrate(initial_state(params), sch, params,
                         SolverConfig(sample_interval=1440.0))
        path = tmp_path / "t.json"
        export_json(traj, str(path))
        doc = json.loads(path.read_text())
        assert set(doc["fields"]) == set(CSV_COLUMNS[1:])
        kinds = [e["kind"] for e in doc["events"]]
        assert kinds == ["session_start", "session_end"]


class TestSummarize:
    def test_anchors_within_horizon_only(self, params):
        sch = EventSchedule(sessions=[], horizon_end=5 * 365 * 1440.0)
        traj = integrate(initial_state(params), sch, params, SolverConfig())
        m = summarize(traj, params)
        assert set(m.G_at) == {4.0, 5.0}
        assert m.vl_peak == 0.0


class TestLttb:
    def test_short_input_untouched(self):
        x = np.arange(5.0)
        assert len(lttb_indices(x, x, 10)) == 5

    def test_bounds_kept_and_size(self):
        x = np.linspace(0.0, 100.0, 5000)
        y = np.sin(x) + 0.1 * x
        idx = lttb_indices(x, y, 400)
        assert idx[0] == 0 and idx[-1] == len(x) - 1
        assert len(idx) <= 400

    def test_preserves_spike(self):
        x = np.linspace(0.0, 1.0, 2000)
        y = np.zeros_like(x)
        y[1200] = 5.0
        idx = lttb_indices(x, y, 100)
        assert 1200 in idx
