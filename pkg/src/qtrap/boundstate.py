"""Bound-state solver: secular equation, weight coefficient, trapped population.

A single normalizable eigenstate below the reservoir continuum exists when
the coupling is strong enough.  Its energy E solves

    omega_0 - Integral J(w)/(w - E) dw = E,

its excited-state weight is b = [1 + Integral J(w)/(w - E)**2 dw]**-0.5, and
the excited population trapped at long times is b**4.

For the Ohmic class the equation is transcendental in kappa = E/omega_c and
is solved by bracketed root finding; a bound state exists iff
eta_o * Gamma(s) >= omega_0/omega_c.  For the band-gap reservoir the
substitution y = sqrt(omega_e - E) reduces it to the cubic

    y**3 + (omega_0 - omega_e) * y - eta_p * omega_e**1.5 = 0,

whose unique positive root is taken in closed form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma

from .errors import ConvergenceError
from .spectral import (
    FrequencyConvention,
    OhmicClass,
    PhotonicBandGap,
    SpectralModel,
    _ohmic_cauchy_moment,
    level_shift_integral,
    mode_weight_integral,
    require_limit_mode_ohmic,
)

__all__ = ["BoundState", "bound_state_exists", "solve_secular", "asymptotic_population"]

_KAPPA_XTOL = 1e-12
_MAX_BRACKET_EXPANSIONS = 200


@dataclass(frozen=True)
class BoundState:
    """Bound-state energy and weight, in working units.

    energy is E (units of omega_c when the convention is limit_mode, of
    omega_0 otherwise); b in (0, 1] is the excited-state amplitude of the
    eigenstate, p_infinity = b**4 the trapped population, residual the
    absolute secular-equation defect at E, and kappa = E/omega_c (Ohmic
    models only).
    """

    energy: float
    b: float
    p_infinity: float
    residual: float
    kappa: Optional[float] = None


def bound_state_exists(model: SpectralModel, convention: FrequencyConvention = FrequencyConvention()) -> bool:
    """Whether the secular equation has a root below the continuum.

    Ohmic class: eta_o * Gamma(s) >= omega_0/omega_c, with the right-hand
    side 0 in limit_mode (so any eta_o > 0 qualifies).  Band gap: always,
    for any eta_p > 0.
    """
    require_limit_mode_ohmic(model, convention)
    if isinstance(model, PhotonicBandGap):
        return model.eta_p > 0
    if model.eta_o == 0:
        return False
    ratio = 0.0 if convention.limit_mode else convention.omega_0 / model.omega_c
    return model.eta_o * gamma(model.s) >= ratio


def solve_secular(
    model: SpectralModel, convention: FrequencyConvention = FrequencyConvention()
) -> Optional[BoundState]:
    """Solve the secular equation; None when no bound state exists.

    Ohmic: the root of g(kappa) = omega_0/omega_c - eta_o * I1(kappa) - kappa
    is bracketed on (-K, 0] (K expanded geometrically until the sign
    changes) and polished to |d kappa| <= 1e-12; g is strictly decreasing,
    so the root is unique.  At the exact existence threshold the root sits
    at kappa = 0 where the mode-weight integral diverges for s <= 1; that
    marginal state carries zero weight and is reported as absent.

    Band gap: closed-form positive cubic root plus one Newton polish.
    """
    require_limit_mode_ohmic(model, convention)
    if not bound_state_exists(model, convention):
        return None

    if isinstance(model, PhotonicBandGap):
        return _solve_band_gap(model, convention.omega_0)
    return _solve_ohmic(model, convention)


def asymptotic_population(state: BoundState) -> float:
    """Long-time excited-state population, |c_infinity|**2 = b**4."""
    return state.b**4


def _solve_ohmic(model: OhmicClass, convention: FrequencyConvention) -> Optional[BoundState]:
    eta, s, wc = model.eta_o, model.s, model.omega_c
    ratio = 0.0 if convention.limit_mode else convention.omega_0 / wc

    def g(kappa):
        return ratio - eta * _ohmic_cauchy_moment(s, kappa, 1) - kappa

    g0 = g(0.0)
    # quadrature noise blurs the exact-threshold equality; within the noise
    # floor the root is the marginal kappa = 0
    if abs(g0) <= 1e-11 * max(1.0, ratio):
        kappa = 0.0
    elif g0 > 0.0:
        return None
    else:
        span = 1.0
        expansions = 0
        while g(-span) < 0.0:
            span *= 2.0
            expansions += 1
            if expansions > _MAX_BRACKET_EXPANSIONS:
                raise ConvergenceError("no sign change after 200 bracket expansions for the secular equation")
        kappa = brentq(g, -span, 0.0, xtol=_KAPPA_XTOL, rtol=8.9e-16)

    if kappa == 0.0 and s <= 1:
        warnings.warn(
            "bound state at the existence threshold has divergent mode weight (s <= 1); treated as absent",
            RuntimeWarning,
            stacklevel=2,
        )
        return None

    weight = eta * _ohmic_cauchy_moment(s, kappa, 2)
    b = float(1.0 / np.sqrt(1.0 + weight))
    if convention.limit_mode:
        energy = kappa
        residual = abs(g(kappa))
    else:
        energy = kappa * wc
        residual = abs(convention.omega_0 - level_shift_integral(model, energy) - energy)
    return BoundState(energy=float(energy), b=b, p_infinity=b**4, residual=float(residual), kappa=float(kappa))


def _solve_band_gap(model: PhotonicBandGap, omega_0: float) -> BoundState:
    we = model.omega_e
    y = _positive_cubic_root(omega_0 - we, model.eta_p * we**1.5)
    energy = we - y * y
    weight = mode_weight_integral(model, energy)
    b = float(1.0 / np.sqrt(1.0 + weight))
    residual = float(abs(omega_0 - level_shift_integral(model, energy) - energy))
    return BoundState(energy=float(energy), b=b, p_infinity=b**4, residual=residual)


def _positive_cubic_root(p: float, q: float) -> float:
    """Unique positive root of y**3 + p*y - q = 0 for q > 0.

    Cardano for a single real root, the trigonometric form when all three
    roots are real (then exactly one is positive because the roots sum to 0
    and their product q is positive), and one Newton step to polish.
    """
    if q <= 0:
        raise ValueError("cubic constant term must be positive (requires eta > 0)")
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc >= 0:
        root = np.sqrt(disc)
        y = np.cbrt(q / 2.0 + root) + np.cbrt(q / 2.0 - root)
    else:
        # three real roots; p < 0 here
        m = 2.0 * np.sqrt(-p / 3.0)
        phi = np.arccos(np.clip(-3.0 * q / (p * m), -1.0, 1.0))
        candidates = m * np.cos((phi - 2.0 * np.pi * np.arange(3)) / 3.0)
        positive = candidates[candidates > 0]
        y = float(np.max(positive))
    slope = 3.0 * y * y + p
    if slope != 0:
        y -= (y**3 + p * y - q) / slope
    return float(y)
