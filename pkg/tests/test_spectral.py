"""Spectral densities, memory kernels and the Cauchy-moment integrals."""

import numpy as np
import pytest
from conftest import band_gap_moment_quad, kernel_quadrature_oracle, random_models
from scipy.special import gamma

from qtrap import (
    ConvergenceError,
    FrequencyConvention,
    OhmicClass,
    PhotonicBandGap,
    evaluate_density,
    level_shift_integral,
    memory_kernel,
    memory_kernel_envelope,
    mode_weight_integral,
)
from qtrap.spectral import require_limit_mode_ohmic


class TestDensity:
    def test_ohmic_vanishes_at_origin(self):
        assert evaluate_density(OhmicClass(0.08, 1.0, 1.0), 0.0) == 0.0
        assert evaluate_density(OhmicClass(0.08, 0.5, 1.0), 0.0) == 0.0

    def test_band_gap_zero_below_edge(self):
        assert evaluate_density(PhotonicBandGap(0.1, 1.0), 0.5) == 0.0

    def test_ohmic_at_cutoff(self):
        # at w = w_c the power-law and cutoff factors collapse to w_c * e^-1
        model = OhmicClass(0.08, 5.5, 0.3)
        expected = 0.08 * 0.3 * np.exp(-1.0)
        assert evaluate_density(model, 0.3) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(8.8291e-3, rel=1e-4)

    def test_band_gap_pole_at_edge(self):
        assert evaluate_density(PhotonicBandGap(0.1, 1.0), 1.0) == np.inf

    def test_band_gap_above_edge(self):
        model = PhotonicBandGap(0.1, 1.0)
        w = 1.25
        assert evaluate_density(model, w) == pytest.approx(0.1 / np.pi / 0.5, rel=1e-14)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ValueError):
            evaluate_density(OhmicClass(0.1, 1.0, 1.0), -0.1)

    def test_non_negative_on_grid(self):
        grid = np.linspace(0.0, 20.0, 800)
        for model in (OhmicClass(0.05, 0.7, 0.9), PhotonicBandGap(0.2, 1.3)):
            values = evaluate_density(model, grid)
            assert np.all(values >= 0.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            OhmicClass(-0.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            OhmicClass(0.1, 0.0, 1.0)
        with pytest.raises(ValueError):
            OhmicClass(0.1, 1.0, -2.0)
        with pytest.raises(ValueError):
            PhotonicBandGap(-0.1, 1.0)
        with pytest.raises(ValueError):
            PhotonicBandGap(0.1, 0.0)


class TestMemoryKernel:
    def test_ohmic_zero_lag_is_total_weight(self):
        # f(0) = Integral J = eta * w_c**2 * Gamma(s+1)
        model = OhmicClass(0.08, 1.0, 1.0)
        assert memory_kernel(model, 0.0) == pytest.approx(0.08, rel=1e-14)
        model = OhmicClass(0.05, 2.5, 0.7)
        assert memory_kernel(model, 0.0) == pytest.approx(0.05 * 0.49 * gamma(3.5), rel=1e-13)

    def test_band_gap_singularity_coefficient(self):
        model = PhotonicBandGap(0.1, 1.0)
        tau = 1e-8
        coefficient = abs(memory_kernel(model, tau)) * np.sqrt(tau)
        assert coefficient == pytest.approx(0.1 / np.sqrt(np.pi), rel=1e-9)
        assert coefficient == pytest.approx(0.056419, rel=1e-4)

    def test_band_gap_zero_lag_rejected(self):
        with pytest.raises(ValueError):
            memory_kernel(PhotonicBandGap(0.1, 1.0), 0.0)

    def test_negative_lag_rejected(self):
        with pytest.raises(ValueError):
            memory_kernel(OhmicClass(0.1, 1.0, 1.0), -1.0)

    def test_long_lag_decay(self):
        ohmic = OhmicClass(0.08, 1.5, 1.0)
        band = PhotonicBandGap(0.1, 1.0)
        assert abs(memory_kernel(ohmic, 500.0)) < 1e-6
        assert abs(memory_kernel(band, 5e4)) < 1e-3
        assert abs(memory_kernel(band, 5e4)) < abs(memory_kernel(band, 1.0))

    def test_envelope_consistent_with_kernel(self):
        model = PhotonicBandGap(0.17, 1.4)
        tau = np.geomspace(1e-3, 30.0, 40)
        full = memory_kernel(model, tau)
        split = memory_kernel_envelope(model, tau) / np.sqrt(tau)
        assert np.max(np.abs(full - split)) < 1e-15

    def test_closed_forms_match_oscillatory_quadrature(self):
        rng = np.random.default_rng(20240811)
        ohmic, band = random_models(rng, 20)
        taus = np.geomspace(0.01, 50.0, 9)
        for models in (ohmic, band):
            for model in models:
                for tau in taus:
                    oracle = kernel_quadrature_oracle(model, tau)
                    closed = memory_kernel(model, tau)
                    assert abs(closed - oracle) <= 1e-6 * abs(oracle)


class TestCauchyMoments:
    def test_ohmic_level_shift_at_zero(self):
        # Integral x**(s-1) e^-x = Gamma(s); also the existence-threshold scale
        for eta, s, wc in ((0.08, 5.5, 0.3), (0.05, 1.0, 1.0), (0.12, 0.5, 0.8)):
            model = OhmicClass(eta, s, wc)
            assert level_shift_integral(model, 0.0) == pytest.approx(eta * wc * gamma(s), rel=1e-10)

    def test_band_gap_level_shift_closed_form(self):
        model = PhotonicBandGap(0.1, 1.0)
        assert level_shift_integral(model, 0.0) == pytest.approx(0.1, rel=1e-14)
        assert level_shift_integral(model, -1e6) < 2e-4

    def test_band_gap_mode_weight_closed_form(self):
        model = PhotonicBandGap(0.1, 1.0)
        assert mode_weight_integral(model, 0.0) == pytest.approx(0.05, rel=1e-14)

    def test_band_gap_closed_forms_match_substituted_quadrature(self):
        rng = np.random.default_rng(7)
        for _ in range(6):
            model = PhotonicBandGap(rng.uniform(0.02, 0.3), rng.uniform(0.5, 2.0))
            energy = model.omega_e - rng.uniform(0.05, 3.0)
            assert level_shift_integral(model, energy) == pytest.approx(
                band_gap_moment_quad(model, energy, 1), rel=1e-9
            )
            assert mode_weight_integral(model, energy) == pytest.approx(
                band_gap_moment_quad(model, energy, 2), rel=1e-9
            )

    def test_level_shift_increasing_in_energy(self):
        # d/dE of 1/(w - E) is +1/(w - E)**2 > 0, so the shift grows with E
        ohmic = OhmicClass(0.08, 5.5, 0.3)
        values = [level_shift_integral(ohmic, e) for e in np.linspace(-3.0, 0.0, 12)]
        assert np.all(np.diff(values) > 0)
        band = PhotonicBandGap(0.1, 1.0)
        values = [level_shift_integral(band, e) for e in np.linspace(-3.0, 0.9, 12)]
        assert np.all(np.diff(values) > 0)

    def test_mode_weight_is_energy_derivative_of_level_shift(self):
        step = 1e-6
        cases = [
            (OhmicClass(0.08, 5.5, 0.3), -0.15),
            (OhmicClass(0.05, 1.2, 1.0), -0.4),
            (PhotonicBandGap(0.1, 1.0), 0.3),
            (PhotonicBandGap(0.25, 1.5), -1.0),
        ]
        for model, energy in cases:
            derivative = (
                level_shift_integral(model, energy + step) - level_shift_integral(model, energy - step)
            ) / (2.0 * step)
            weight = mode_weight_integral(model, energy)
            assert weight == pytest.approx(derivative, rel=1e-6)

    def test_mode_weight_positive(self):
        assert mode_weight_integral(OhmicClass(0.08, 5.5, 0.3), -0.2) > 0
        assert mode_weight_integral(PhotonicBandGap(0.1, 1.2), 0.0) > 0

    def test_sub_ohmic_endpoint(self):
        model = OhmicClass(0.1, 0.5, 1.0)
        assert level_shift_integral(model, 0.0) == pytest.approx(0.1 * gamma(0.5), rel=1e-9)
        with pytest.raises(ConvergenceError):
            mode_weight_integral(model, 0.0)

    def test_continuum_energies_rejected(self):
        with pytest.raises(ValueError):
            level_shift_integral(OhmicClass(0.1, 1.0, 1.0), 0.5)
        with pytest.raises(ValueError):
            level_shift_integral(PhotonicBandGap(0.1, 1.0), 1.0)
        with pytest.raises(ValueError):
            mode_weight_integral(PhotonicBandGap(0.1, 1.0), 1.5)


class TestConvention:
    def test_limit_mode_requires_ohmic(self):
        convention = FrequencyConvention(limit_mode=True)
        require_limit_mode_ohmic(OhmicClass(0.08, 2.0, 1.0), convention)
        with pytest.raises(ValueError):
            require_limit_mode_ohmic(PhotonicBandGap(0.1, 1.0), convention)

    def test_omega_0_positive(self):
        with pytest.raises(ValueError):
            FrequencyConvention(omega_0=0.0)
