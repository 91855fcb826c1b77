"""Amplitude integration, Bloch tracks and limit-cycle estimation."""

import numpy as np
import pytest

from qtrap import (
    FrequencyConvention,
    OhmicClass,
    PhotonicBandGap,
    SteadyStateError,
    bloch_trajectory,
    default_time_step,
    estimate_limit_cycle,
    evolve_amplitude,
    memory_kernel,
    solve_secular,
)
from qtrap.dynamics import _check_step
from qtrap.errors import StepSizeError

GROUND = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
EXCITED = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def fig_initial_state():
    # cos(pi/12)|e> + i sin(pi/12)|g>
    ce, cg = np.cos(np.pi / 12.0), 1j * np.sin(np.pi / 12.0)
    psi = np.array([ce, cg])
    return np.outer(psi, psi.conj())


class TestEvolve:
    def test_free_evolution(self):
        traj = evolve_amplitude(OhmicClass(0.0, 1.0, 1.0), t_max=10.0, dt=0.01)
        assert traj.amplitudes[0] == 1.0 + 0.0j
        assert np.max(np.abs(np.abs(traj.amplitudes) - 1.0)) < 1e-12
        # free phase exp(-i t)
        idx = 100
        assert traj.amplitudes[idx] == pytest.approx(np.exp(-1j * traj.times[idx]), abs=1e-12)

    def test_initial_amplitude_exact(self):
        for model in (OhmicClass(0.08, 5.5, 0.3), PhotonicBandGap(0.08, 1.0)):
            traj = evolve_amplitude(model, t_max=1.0, dt=0.01)
            assert traj.amplitudes[0] == 1.0 + 0.0j

    def test_contractivity(self):
        cases = [
            OhmicClass(0.08, 5.5, 0.3),
            OhmicClass(0.1, 1.0, 1.0),
            OhmicClass(0.05, 0.7, 0.5),
            PhotonicBandGap(0.08, 1.0),
            PhotonicBandGap(0.2, 0.8),
            PhotonicBandGap(0.05, 1.3),
        ]
        for model in cases:
            traj = evolve_amplitude(model, t_max=40.0)
            assert np.max(np.abs(traj.amplitudes)) <= 1.0 + 1e-9

    def test_short_time_quadratic_depletion(self):
        # 1 - |c(t)|^2 = f(0) t^2 + O(t^3)
        model = OhmicClass(0.1, 1.5, 1.0)
        traj = evolve_amplitude(model, t_max=0.05, dt=0.0005)
        t = traj.times[1:]
        depletion = 1.0 - np.abs(traj.amplitudes[1:]) ** 2
        basis = np.column_stack([t**2, t**3])
        coef, *_ = np.linalg.lstsq(basis, depletion, rcond=None)
        assert coef[0] == pytest.approx(memory_kernel(model, 0.0).real, rel=0.05)

    def test_band_gap_trailing_mean_near_trapped_population(self):
        model = PhotonicBandGap(0.08, 1.0)
        traj = evolve_amplitude(model, t_max=80.0)
        window = len(traj.times) // 10
        mean_pop = float(np.mean(np.abs(traj.amplitudes[-window:]) ** 2))
        assert mean_pop == pytest.approx(4.0 / 9.0, rel=0.03)

    def test_limit_mode_trailing_mean(self):
        convention = FrequencyConvention(limit_mode=True)
        model = OhmicClass(0.08, 2.34, 7.0)  # omega_c ignored in scaled units
        traj = evolve_amplitude(model, convention, t_max=60.0, dt=0.02)
        state = solve_secular(model, convention)
        window = len(traj.times) // 10
        mean_pop = float(np.mean(np.abs(traj.amplitudes[-window:]) ** 2))
        assert mean_pop == pytest.approx(state.p_infinity, rel=0.05)

    def test_default_time_step(self):
        assert default_time_step(OhmicClass(0.1, 1.0, 0.3)) == pytest.approx(0.01)
        assert default_time_step(OhmicClass(0.1, 1.0, 10.0)) == pytest.approx(0.005)
        assert default_time_step(PhotonicBandGap(0.1, 1.0)) == pytest.approx(0.005)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            evolve_amplitude(OhmicClass(0.1, 1.0, 1.0), t_max=1.0, dt=0.0)
        with pytest.raises(ValueError):
            evolve_amplitude(OhmicClass(0.1, 1.0, 1.0), t_max=0.001, dt=0.01)
        with pytest.raises(ValueError):
            evolve_amplitude(PhotonicBandGap(0.1, 1.0), FrequencyConvention(limit_mode=True), t_max=1.0)

    def test_step_guard_raises(self):
        with pytest.raises(StepSizeError) as info:
            _check_step(1.5 + 0.0j, step=7)
        assert info.value.step == 7


class TestBloch:
    def test_ground_state_is_stationary(self):
        traj = evolve_amplitude(OhmicClass(0.08, 5.5, 0.3), t_max=5.0)
        points = np.asarray(bloch_trajectory(traj, GROUND))
        assert np.max(np.abs(points - np.array([0.0, 0.0, -1.0]))) < 1e-12

    def test_stays_inside_sphere(self):
        traj = evolve_amplitude(PhotonicBandGap(0.08, 1.0), t_max=30.0)
        points = np.asarray(bloch_trajectory(traj, fig_initial_state()))
        purity = np.sum(points**2, axis=1)
        assert np.max(purity) <= 1.0 + 1e-9

    def test_purity_monotone_while_population_dominates(self):
        # purity can only shrink along decaying segments while
        # rho_ee(0) |c|^2 >= 1/2; below that the damping repurifies
        traj = evolve_amplitude(OhmicClass(0.08, 5.5, 0.3), t_max=40.0)
        rho0 = fig_initial_state()
        points = np.asarray(bloch_trajectory(traj, rho0))
        purity = np.sum(points**2, axis=1)
        mags = np.abs(traj.amplitudes)
        dominated = rho0[0, 0].real * mags**2 >= 0.5
        decaying = np.diff(mags) <= 0
        select = dominated[:-1] & dominated[1:] & decaying
        assert np.count_nonzero(select) > 10
        assert np.all(np.diff(purity)[select] <= 1e-9)

    def test_initial_point_matches_state(self):
        traj = evolve_amplitude(OhmicClass(0.0, 1.0, 1.0), t_max=1.0, dt=0.01)
        rho0 = fig_initial_state()
        first = bloch_trajectory(traj, rho0)[0]
        assert first.x == pytest.approx(2.0 * rho0[0, 1].real, abs=1e-14)
        assert first.y == pytest.approx(-2.0 * rho0[0, 1].imag, abs=1e-14)
        assert first.z == pytest.approx(2.0 * rho0[0, 0].real - 1.0, abs=1e-14)

    def test_invalid_state_rejected(self):
        traj = evolve_amplitude(OhmicClass(0.0, 1.0, 1.0), t_max=1.0, dt=0.01)
        with pytest.raises(ValueError):
            bloch_trajectory(traj, np.array([[0.9, 0.0], [0.0, 0.0]]))
        with pytest.raises(ValueError):
            bloch_trajectory(traj, np.array([[0.5, 0.9], [0.9, 0.5]]))
        with pytest.raises(ValueError):
            bloch_trajectory(traj, np.array([[0.5, 1j], [1j, 0.5]]))


class TestLimitCycle:
    def test_no_decay_keeps_initial_radius(self):
        traj = evolve_amplitude(OhmicClass(0.0, 1.0, 1.0), t_max=20.0, dt=0.01)
        rho0 = fig_initial_state()
        cycle = estimate_limit_cycle(traj, rho0)
        assert cycle.radius == pytest.approx(2.0 * abs(rho0[0, 1]), rel=1e-12)
        assert cycle.height == pytest.approx(2.0 * rho0[0, 0].real - 1.0, rel=1e-12)

    def test_trapped_orbit_radius(self):
        model = OhmicClass(0.08, 5.5, 0.3)
        traj = evolve_amplitude(model, t_max=120.0)
        cycle = estimate_limit_cycle(traj, fig_initial_state())
        expected = 0.5 * np.sqrt(solve_secular(model).p_infinity)
        assert cycle.radius == pytest.approx(expected, rel=0.02)

    def test_fully_decayed_reports_zero_radius(self):
        # sub-threshold coupling: |c| -> 0, which should count as settled
        model = OhmicClass(0.01, 1.0, 1.0)
        traj = evolve_amplitude(model, t_max=900.0, dt=0.02)
        cycle = estimate_limit_cycle(traj, fig_initial_state())
        assert cycle.radius < 0.01
        assert cycle.height == pytest.approx(-1.0, abs=0.01)

    def test_unsettled_window_rejected(self):
        # strong sub-threshold decay still in full flight at t_max
        model = OhmicClass(0.05, 1.0, 1.0)
        traj = evolve_amplitude(model, t_max=30.0, dt=0.01)
        with pytest.raises(SteadyStateError):
            estimate_limit_cycle(traj, fig_initial_state())
