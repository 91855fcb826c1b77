"""Shared test helpers: independent quadrature oracles and random states."""

import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from qtrap import OhmicClass, PhotonicBandGap, PureInput, evaluate_density


def kernel_quadrature_oracle(model, tau):
    """Oscillatory quadrature of Integral J(w) exp(-i w tau) dw.

    Independent of the closed-form kernels.  Ohmic: QAWO panels on a finite
    window truncated where the density drops below 1e-14.  Band gap: the
    near-edge piece is integrated after the w = w_e + y**2 substitution and
    the slowly decaying tail with the Fourier-weight rule on [w_e + 1, inf).
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if isinstance(model, OhmicClass):
            return _ohmic_kernel_quad(model, tau)
        return _band_gap_kernel_quad(model, tau)


def _ohmic_kernel_quad(model, tau):
    def density(w):
        return evaluate_density(model, w)

    w_max = model.omega_c
    while density(w_max) > 1e-14:
        w_max *= 1.5
    limit = int(100 + 10 * w_max * tau)
    re = quad(density, 0.0, w_max, weight="cos", wvar=tau, epsabs=1e-15, epsrel=1e-12, limit=limit)[0]
    im = -quad(density, 0.0, w_max, weight="sin", wvar=tau, epsabs=1e-15, epsrel=1e-12, limit=limit)[0]
    return re + 1j * im


def _band_gap_kernel_quad(model, tau):
    we = model.omega_e
    coef = model.eta_p / np.pi * we**1.5

    def near_re(y):
        return 2.0 * coef * np.cos((we + y * y) * tau)

    def near_im(y):
        return -2.0 * coef * np.sin((we + y * y) * tau)

    def tail(w):
        return coef / np.sqrt(w - we)

    re = quad(near_re, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
    im = quad(near_im, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
    re += quad(tail, we + 1.0, np.inf, weight="cos", wvar=tau, epsabs=1e-12, limit=400, limlst=400)[0]
    im -= quad(tail, we + 1.0, np.inf, weight="sin", wvar=tau, epsabs=1e-12, limit=400, limlst=400)[0]
    return re + 1j * im


def band_gap_moment_quad(model, energy, power):
    """Integral J(w)/(w - E)**power dw with the edge removed by w = w_e + y**2."""
    we = model.omega_e
    coef = model.eta_p / np.pi * we**1.5

    def integrand(y):
        return 2.0 * coef / (we + y * y - energy) ** power

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)
    return value


def random_pure_input(rng):
    weights = rng.normal(size=2) ** 2
    alpha = float(np.sqrt(weights[0] / weights.sum()))
    beta = float(np.sqrt(max(0.0, 1.0 - alpha**2)))

    def vec():
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return v / np.linalg.norm(v)

    return PureInput(alpha, beta, vec(), vec())


def bell_input():
    """(|eg> + |ge>)/sqrt(2) in the pure-input parameterization."""
    return PureInput(
        1.0 / np.sqrt(2.0),
        1.0 / np.sqrt(2.0),
        np.array([0.0, 1.0], dtype=complex),
        np.array([1.0, 0.0], dtype=complex),
    )


def random_density_matrix(rng, dim=4, rank=None):
    rank = rank or dim
    amp = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = amp @ amp.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_models(rng, count):
    """Parameter draws keeping kernel magnitudes resolvable over tau <= 50."""
    ohmic = [
        OhmicClass(rng.uniform(0.02, 0.2), rng.uniform(0.5, 3.0), rng.uniform(0.3, 1.2))
        for _ in range(count)
    ]
    band = [
        PhotonicBandGap(rng.uniform(0.01, 0.3), rng.uniform(0.3, 3.0))
        for _ in range(count)
    ]
    return ohmic, band
