"""End-to-end tests of the command-line interface."""

import math

import numpy as np
import pytest

from fracsys import eval_solution, solve_system, SystemSpec
from fracsys.cli import main


def _read_csv(path):
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        assert header == "t,x,y"
        for line in fh:
            t, x, y = line.strip().split(",")
            rows.append((float(t), float(x), float(y)))
    return np.array(rows)


class TestMlCommand:
    def test_exponential(self, capsys):
        assert main(["ml", "--alpha", "1", "--re", "1"]) == 0
        out = capsys.readouterr().out.strip()
        assert out == "2.71828182846"

    def test_two_parameter(self, capsys):
        assert main(["ml", "--alpha", "2", "--beta", "2", "--re", "1"]) == 0
        assert capsys.readouterr().out.strip() == "1.17520119364"

    def test_zero_argument(self, capsys):
        assert main(["ml", "--alpha", "0.5", "--re", "0"]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_complex_argument_prints_both_parts(self, capsys):
        assert main(["ml", "--alpha", "0.8", "--re", "0.3", "--im", "1.2"]) == 0
        parts = capsys.readouterr().out.split()
        assert len(parts) == 2
        assert float(parts[1]) != 0.0

    def test_nonconvergent_input_exits_3(self, capsys):
        assert main(["ml", "--alpha", "0.9", "--re", "-60"]) == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_overflowing_input_exits_3(self, capsys):
        assert main(["ml", "--alpha", "1", "--re", "710"]) == 3

    def test_invalid_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["ml", "--alpha", "1"])  # missing --re
        assert err.value.code == 2

    def test_invalid_domain_exits_2(self, capsys):
        assert main(["ml", "--alpha", "-1", "--re", "1"]) == 2
        assert "error" in capsys.readouterr().err


class TestSolveCommand:
    GROWTH = ["--matrix", "2,1,1,2", "--x0", "2", "--y0", "0"]
    DECAY = ["--matrix", "-2,1,1,-2", "--x0", "2", "--y0", "0"]
    SPIRAL = ["--matrix", "3,2,-5,1", "--x0", "2", "--y0", "1"]

    def test_growth_csv(self, tmp_path, capsys):
        out = tmp_path / "growth.csv"
        rc = main(
            ["solve", "--alpha", "0.8", *self.GROWTH, "--t-max", "2", "--steps", "201",
             "--out", str(out)]
        )
        assert rc == 0
        stdout = capsys.readouterr().out
        assert "distinct real 1, 3" in stdout
        rows = _read_csv(out)
        assert rows.shape == (201, 3)
        assert rows[0, 0] == 0.0 and rows[0, 1] == 2.0 and rows[0, 2] == 0.0
        assert np.all(np.diff(rows[:, 1]) > 0.0)

    def test_decay_csv_monotone(self, tmp_path):
        out = tmp_path / "decay.csv"
        rc = main(
            ["solve", "--alpha", "1", *self.DECAY, "--t-max", "5", "--steps", "501",
             "--out", str(out)]
        )
        assert rc == 0
        rows = _read_csv(out)
        assert np.all(rows[:, 1] > 0.0)
        assert np.all(np.diff(rows[:, 1]) < 0.0)
        assert np.all(np.diff(rows[:, 2]) < 0.0)

    def test_spiral_sign_changes(self, tmp_path):
        out = tmp_path / "spiral.csv"
        rc = main(
            ["solve", "--alpha", "1", *self.SPIRAL, "--t-max", "3", "--steps", "601",
             "--out", str(out)]
        )
        assert rc == 0
        x = _read_csv(out)[:, 1]
        assert int(np.sum(np.diff(np.sign(x)) != 0)) >= 2

    def test_deterministic_output(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        flags = ["solve", "--alpha", "0.6", *self.SPIRAL, "--t-max", "2", "--steps", "101"]
        assert main([*flags, "--out", str(first)]) == 0
        assert main([*flags, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_round_trip_reevaluation(self, tmp_path):
        """Values parsed back from the CSV match re-evaluation at the
        stored times to the emitted precision."""
        out = tmp_path / "rt.csv"
        assert main(
            ["solve", "--alpha", "0.7", *self.GROWTH, "--t-max", "1.5", "--steps", "97",
             "--out", str(out)]
        ) == 0
        sol = solve_system(SystemSpec(2, 1, 1, 2, 0.7, 2, 0))
        for t, x, y in _read_csv(out):
            xr, yr = eval_solution(sol, t)
            assert abs(x - xr) <= 10.0 ** (1 - 12) * max(1.0, abs(xr))
            assert abs(y - yr) <= 10.0 ** (1 - 12) * max(1.0, abs(yr))

    def test_bad_matrix_exits_2(self, tmp_path, capsys):
        rc = main(
            ["solve", "--alpha", "0.8", "--matrix", "1,2,3", "--x0", "1", "--y0", "0",
             "--t-max", "1", "--steps", "10", "--out", str(tmp_path / "x.csv")]
        )
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestOscillatorCommand:
    def test_damped_peaks_decay(self, tmp_path):
        out = tmp_path / "osc.csv"
        rc = main(
            ["oscillator", "--alpha", "1", "--a", "0.1", "--b", "2", "--x0", "2",
             "--dx0", "1", "--t-max", "20", "--steps", "4001", "--out", str(out)]
        )
        assert rc == 0
        rows = _read_csv(out)
        x = rows[:, 1]
        crossings = np.where(np.diff(np.sign(x)) != 0)[0]
        bounds = [0, *crossings.tolist(), len(x) - 1]
        peaks = [
            np.max(np.abs(x[lo : hi + 1]))
            for lo, hi in zip(bounds, bounds[1:])
            if hi - lo >= 3
        ]
        assert len(peaks) >= 6
        assert all(p1 > p2 for p1, p2 in zip(peaks, peaks[1:]))

    def test_undamped_peaks_constant(self, tmp_path):
        out = tmp_path / "undamped.csv"
        rc = main(
            ["oscillator", "--alpha", "1", "--a", "0", "--b", "2", "--x0", "2",
             "--dx0", "0", "--t-max", "10", "--steps", "20001", "--out", str(out)]
        )
        assert rc == 0
        rows = _read_csv(out)
        x = rows[:, 1]
        crossings = np.where(np.diff(np.sign(x)) != 0)[0]
        bounds = [0, *crossings.tolist(), len(x) - 1]
        peaks = []
        for lo, hi in zip(bounds, bounds[1:]):
            if hi - lo < 5:
                continue
            seg = np.abs(x[lo : hi + 1])
            j = int(np.argmax(seg))
            if 0 < j < seg.size - 1:
                y0, y1, y2 = seg[j - 1], seg[j], seg[j + 1]
                denom = y0 - 2.0 * y1 + y2
                shift = 0.0 if denom == 0.0 else 0.5 * (y0 - y2) / denom
                peaks.append(y1 - 0.25 * (y0 - y2) * shift)
        assert len(peaks) >= 4
        assert max(peaks) - min(peaks) <= 1e-6 * max(peaks)

    def test_low_order_loses_oscillation(self, tmp_path):
        """At alpha = 0.2 the displacement never crosses zero beyond the
        initial transient (the certified window ends near t = 4.5, where
        series cancellation would otherwise destroy the evaluation)."""
        out = tmp_path / "low.csv"
        rc = main(
            ["oscillator", "--alpha", "0.2", "--a", "0.1", "--b", "2", "--x0", "2",
             "--dx0", "1", "--t-max", "4", "--steps", "801", "--out", str(out)]
        )
        assert rc == 0
        rows = _read_csv(out)
        late = rows[rows[:, 0] >= 0.5]
        assert np.all(np.sign(late[:, 1]) == np.sign(late[0, 1]))

    def test_uncertifiable_window_exits_3(self, tmp_path, capsys):
        rc = main(
            ["oscillator", "--alpha", "0.2", "--a", "0.1", "--b", "2", "--x0", "2",
             "--dx0", "1", "--t-max", "10", "--steps", "101", "--out",
             str(tmp_path / "never.csv")]
        )
        assert rc == 3
        assert "numerical failure" in capsys.readouterr().err


class TestResidualCommand:
    def test_matrix_residual(self, capsys):
        rc = main(
            ["residual", "--alpha", "0.6", "--matrix", "2,1,1,2", "--x0", "2",
             "--y0", "0", "--t-max", "1", "--h", "1e-3"]
        )
        assert rc == 0
        captured = capsys.readouterr()
        line = captured.out.splitlines()[0]
        assert "max_scaled=" in line
        value = float(line.split("max_scaled=")[1].split()[0])
        assert value <= 1e-2
        assert "floor" not in captured.err

    def test_zero_initial_conditions(self, capsys):
        rc = main(
            ["residual", "--alpha", "0.6", "--matrix", "2,1,1,2", "--x0", "0",
             "--y0", "0", "--t-max", "1", "--h", "1e-3"]
        )
        assert rc == 0
        value = float(capsys.readouterr().out.split("max_scaled=")[1].split()[0])
        assert value <= 1e-12

    def test_defective_floor_reported_not_failing(self, capsys):
        rc = main(
            ["residual", "--alpha", "0.5", "--matrix", "4,-1,1,2", "--x0", "2",
             "--y0", "1", "--t-max", "1", "--h", "1e-3"]
        )
        assert rc == 0
        captured = capsys.readouterr()
        assert "residual floor detected" in captured.err

    def test_oscillator_residual(self, capsys):
        rc = main(
            ["residual", "--alpha", "1", "--oscillator", "--a", "0.1", "--b", "2",
             "--x0", "2", "--dx0", "1", "--t-max", "10", "--h", "1e-3"]
        )
        assert rc == 0
        value = float(capsys.readouterr().out.split("max_scaled=")[1].split()[0])
        assert value <= 1e-4

    def test_missing_target_exits_2(self, capsys):
        rc = main(["residual", "--alpha", "0.5", "--t-max", "1", "--h", "1e-3"])
        assert rc == 2

    def test_conflicting_targets_exit_2(self, capsys):
        rc = main(
            ["residual", "--alpha", "0.5", "--matrix", "1,0,0,1", "--oscillator",
             "--a", "1", "--b", "1", "--x0", "1", "--dx0", "0",
             "--t-max", "1", "--h", "1e-3"]
        )
        assert rc == 2
