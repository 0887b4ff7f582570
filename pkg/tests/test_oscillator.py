"""Tests for the damped-oscillator reduction and residuals."""

import math

import numpy as np
import pytest

from fracsys import (
    ComplexPair,
    DistinctReal,
    MODE_FACTORED,
    OscillatorSpec,
    RepeatedRoot,
    SampledFunction,
    classify,
    eval_solution,
    jumarie_oracle,
    oscillator_residual,
    reduce_to_system,
    sample_trajectory,
    solve_oscillator,
)


def _sampled_peaks(t, x):
    """One amplitude per half-period: max |x| between consecutive zero
    crossings, refined by a parabola through the neighbouring samples.

    Segmenting at sign changes keeps evaluation noise from splitting a
    single physical peak into several spurious local maxima.
    """
    crossings = np.where(np.diff(np.sign(x)) != 0)[0]
    bounds = [0, *crossings.tolist(), len(x) - 1]
    ax = np.abs(x)
    peaks = []
    for lo, hi in zip(bounds, bounds[1:]):
        if hi - lo < 3:
            continue
        j = lo + int(np.argmax(ax[lo : hi + 1]))
        if j == 0 or j == len(x) - 1:
            peaks.append(ax[j])
            continue
        y0, y1, y2 = ax[j - 1], ax[j], ax[j + 1]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.0 if denom == 0.0 else 0.5 * (y0 - y2) / denom
        peaks.append(y1 - 0.25 * (y0 - y2) * shift)
    return peaks


class TestReduction:
    def test_matrix_layout(self):
        sys_spec = reduce_to_system(OscillatorSpec(0.1, 2.0, 0.8, 2.0, 1.0))
        assert np.allclose(sys_spec.matrix, [[0.0, 1.0], [-2.0, -0.2]])
        assert sys_spec.x0 == 2.0 and sys_spec.y0 == 1.0

    def test_free_particle_structure(self):
        sys_spec = reduce_to_system(OscillatorSpec(0.0, 0.0, 0.5, 1.0, 0.0))
        assert np.allclose(sys_spec.matrix, [[0.0, 1.0], [0.0, 0.0]])

    def test_overdamped_eigenvalues(self):
        sys_spec = reduce_to_system(OscillatorSpec(2.0, 1.0, 0.6, 1.0, 0.0))
        cls = classify(sys_spec)
        assert isinstance(cls, DistinctReal)
        assert abs(cls.lambda1 - (-2.0 - math.sqrt(3.0))) < 1e-12
        assert abs(cls.lambda2 - (-2.0 + math.sqrt(3.0))) < 1e-12

    def test_underdamped_eigenvalues(self):
        cls = classify(reduce_to_system(OscillatorSpec(0.1, 2.0, 0.7, 2.0, 1.0)))
        assert isinstance(cls, ComplexPair)
        assert abs(cls.p + 0.1) < 1e-12
        assert abs(cls.q - math.sqrt(2.0 - 0.01)) < 1e-12

    def test_critical_damping(self):
        cls = classify(reduce_to_system(OscillatorSpec(1.0, 1.0, 0.5, 1.0, 0.0)))
        assert isinstance(cls, RepeatedRoot)
        assert abs(cls.lam + 1.0) < 1e-12 and cls.defective


class TestClosedForm:
    def test_undamped_classical_solution(self):
        """a = 0, b = 2, alpha = 1: x = 2 cos(qt) + (1/q) sin(qt), q = sqrt 2."""
        q = math.sqrt(2.0)
        sol = solve_oscillator(OscillatorSpec(0.0, 2.0, 1.0, 2.0, 1.0))
        for t in np.linspace(0.0, 4.0, 33):
            x, _ = eval_solution(sol, float(t))
            ref = 2.0 * math.cos(q * t) + math.sin(q * t) / q
            assert abs(x - ref) < 1e-11

    def test_factored_constants(self):
        spec = OscillatorSpec(0.1, 2.0, 0.8, 2.0, 1.0)
        sol = solve_oscillator(spec, mode=MODE_FACTORED)
        p = -spec.a
        q = math.sqrt(spec.b - spec.a**2)
        c1, c2 = sol.constants
        assert abs(c1 - spec.x0) < 1e-12
        assert abs(c2 - (spec.dx0 - p * spec.x0) / q) < 1e-12

    def test_initial_conditions(self):
        sol = solve_oscillator(OscillatorSpec(0.1, 2.0, 0.6, 2.0, 1.0))
        x, y = eval_solution(sol, 0.0)
        assert abs(x - 2.0) < 1e-10 and abs(y - 1.0) < 1e-10

    def test_second_component_is_fractional_velocity(self):
        """y equals D^alpha x within the oracle tolerance."""
        spec = OscillatorSpec(0.1, 2.0, 0.7, 2.0, 1.0)
        sol = solve_oscillator(spec)
        h = 1e-3
        traj = sample_trajectory(sol, 2.0, int(round(2.0 / h)) + 1)
        d = jumarie_oracle(SampledFunction(0.0, h, traj.x), spec.alpha)
        mask = traj.t >= 0.1
        assert np.max(np.abs(d.values[mask] - traj.y[mask])) < 5e-3


class TestQualitativeBehavior:
    def test_damped_peaks_decay(self):
        sol = solve_oscillator(OscillatorSpec(0.1, 2.0, 1.0, 2.0, 1.0))
        traj = sample_trajectory(sol, 20.0, 4001)
        peaks = _sampled_peaks(traj.t, traj.x)
        assert len(peaks) >= 6
        assert all(p1 > p2 for p1, p2 in zip(peaks, peaks[1:]))

    def test_undamped_energy_conservation(self):
        spec = OscillatorSpec(0.0, 2.0, 1.0, 2.0, 1.0)
        sol = solve_oscillator(spec)
        traj = sample_trajectory(sol, 5.0, 2001)
        energy = traj.x**2 + traj.y**2 / spec.b
        assert np.max(np.abs(energy - energy[0])) <= 1e-6 * energy[0]


class TestResidual:
    def test_classical_order_bound(self):
        spec = OscillatorSpec(0.1, 2.0, 1.0, 2.0, 1.0)
        sol = solve_oscillator(spec)
        rep = oscillator_residual(spec, sol, t_max=10.0, h=1e-3)
        assert rep.max_scaled <= 1e-4

    def test_constant_solution_zero_residual(self):
        spec = OscillatorSpec(0.0, 0.0, 0.5, 3.0, 0.0)
        sol = solve_oscillator(spec)
        rep = oscillator_residual(spec, sol, t_max=2.0, h=1e-3)
        assert rep.max_abs <= 1e-12

    def test_fractional_exact_mode_contracts(self):
        """Complex-exact solutions drive the composed residual toward zero."""
        spec = OscillatorSpec(0.1, 2.0, 0.8, 2.0, 1.0)
        sol = solve_oscillator(spec)
        reps = [
            oscillator_residual(spec, sol, t_max=5.0, h=h) for h in (2e-3, 1e-3, 5e-4)
        ]
        values = [r.max_scaled for r in reps]
        assert values[0] > values[1] > values[2]
