"""Reservoir spectral densities and the integrals derived from them.

Two model families are supported:

* Ohmic class,  J(w) = eta_o * w_c**(1-s) * w**s * exp(-w/w_c), covering
  sub-Ohmic (s < 1), Ohmic (s = 1) and super-Ohmic (s > 1) reservoirs.
* Photonic band gap,  J(w) = (eta_p/pi) * w_e**1.5 / sqrt(w - w_e) for
  w > w_e and zero below the band edge.

All frequencies are expressed in units of the qubit transition frequency
omega_0 = 1.  The high-cutoff scaled regime (``limit_mode``) instead uses the
cutoff w_c as the unit and sends omega_0/w_c -> 0; it only applies to the
Ohmic class.

Besides the densities themselves this module evaluates the memory kernel
f(tau) = Integral J(w) exp(-i w tau) dw and the two Cauchy-type moments
Integral J(w)/(w-E) dw and Integral J(w)/(w-E)**2 dw that control the
bound-state energy and weight.  Closed forms are used wherever they exist;
the Ohmic moments fall back to adaptive quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

from .errors import ConvergenceError

__all__ = [
    "OhmicClass",
    "PhotonicBandGap",
    "SpectralModel",
    "FrequencyConvention",
    "evaluate_density",
    "memory_kernel",
    "memory_kernel_envelope",
    "level_shift_integral",
    "mode_weight_integral",
]

# Quadrature target, one order tighter than the root-finding tolerance
# used downstream.
_QUAD_RELTOL = 1e-12


@dataclass(frozen=True)
class OhmicClass:
    """Ohmic-class reservoir parameters (frequencies in units of omega_0).

    eta_o >= 0 is the dimensionless coupling strength, s > 0 the Ohmicity
    exponent and omega_c > 0 the exponential cutoff.  eta_o = 0 is the
    decoupled limit, accepted so that free evolution can be expressed.
    """

    eta_o: float
    s: float
    omega_c: float

    def __post_init__(self):
        if not self.eta_o >= 0:
            raise ValueError(f"eta_o must be >= 0, got {self.eta_o}")
        if not self.s > 0:
            raise ValueError(f"s must be > 0, got {self.s}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")


@dataclass(frozen=True)
class PhotonicBandGap:
    """Photonic-crystal reservoir with an inverse-square-root band edge.

    eta_p >= 0 is the dimensionless coupling strength and omega_e > 0 the
    band-edge frequency (units of omega_0).  The density diverges as
    (w - omega_e)**-0.5 just above the edge and vanishes below it.
    """

    eta_p: float
    omega_e: float

    def __post_init__(self):
        if not self.eta_p >= 0:
            raise ValueError(f"eta_p must be >= 0, got {self.eta_p}")
        if not self.omega_e > 0:
            raise ValueError(f"omega_e must be > 0, got {self.omega_e}")


SpectralModel = Union[OhmicClass, PhotonicBandGap]


@dataclass(frozen=True)
class FrequencyConvention:
    """Unit convention for all frequency-like quantities.

    omega_0 is the qubit transition frequency and equals 1 by convention.
    With ``limit_mode`` set the working unit becomes the Ohmic cutoff
    omega_c and the ratio omega_0/omega_c is taken to 0; bound-state
    outputs are then reported in units of omega_c.  limit_mode is only
    meaningful for Ohmic-class models.
    """

    omega_0: float = 1.0
    limit_mode: bool = False

    def __post_init__(self):
        if not self.omega_0 > 0:
            raise ValueError(f"omega_0 must be > 0, got {self.omega_0}")


def require_limit_mode_ohmic(model: SpectralModel, convention: FrequencyConvention):
    """Raise if limit_mode is combined with a non-Ohmic model."""
    if convention.limit_mode and not isinstance(model, OhmicClass):
        raise ValueError("limit_mode applies to Ohmic-class models only")


def evaluate_density(model: SpectralModel, omega):
    """Spectral density J(omega) for omega >= 0.

    Accepts scalars or arrays.  For the band-gap model the density is 0
    below the edge and +inf exactly at it (the pole is real; a finite
    stand-in would be wrong).
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be non-negative")
    if isinstance(model, OhmicClass):
        out = model.eta_o * model.omega_c ** (1.0 - model.s) * w**model.s * np.exp(-w / model.omega_c)
    else:
        d = w - model.omega_e
        coef = model.eta_p / np.pi * model.omega_e**1.5
        out = np.zeros_like(w)
        above = d > 0
        out[above] = coef / np.sqrt(d[above])
        out[d == 0] = np.inf if model.eta_p > 0 else 0.0
    return out if out.ndim else float(out)


def memory_kernel(model: SpectralModel, tau):
    """Memory kernel f(tau) = Integral_0^inf J(w) exp(-i w tau) dw.

    Closed forms:

    * Ohmic class:      eta_o * w_c**2 * Gamma(s+1) / (1 + i w_c tau)**(s+1)
    * photonic band gap: eta_p * w_e**1.5 * exp(-i (w_e tau + pi/4)) / sqrt(pi tau)

    tau may be a scalar or array; tau < 0 is a domain error, and tau = 0 is
    rejected for the band-gap model where the kernel has an integrable
    tau**-0.5 singularity (see :func:`memory_kernel_envelope`).
    """
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0):
        raise ValueError("tau must be non-negative")
    if isinstance(model, OhmicClass):
        out = model.eta_o * model.omega_c**2 * gamma(model.s + 1.0) / (1.0 + 1j * model.omega_c * t) ** (model.s + 1.0)
    else:
        if np.any(t == 0):
            raise ValueError("band-gap kernel diverges as tau**-0.5 at tau = 0; evaluate the envelope instead")
        out = memory_kernel_envelope(model, t) / np.sqrt(t)
    return out if np.ndim(out) else complex(out)


def memory_kernel_envelope(model: PhotonicBandGap, tau):
    """Smooth factor g(tau) of the band-gap kernel, f(tau) = g(tau)/sqrt(tau).

    g(tau) = eta_p * w_e**1.5 * exp(-i (w_e tau + pi/4)) / sqrt(pi); finite
    at tau = 0, which is what product-integration time stepping samples.
    """
    if not isinstance(model, PhotonicBandGap):
        raise TypeError("the kernel envelope is defined for the band-gap model only")
    t = np.asarray(tau, dtype=float)
    out = model.eta_p * model.omega_e**1.5 / np.sqrt(np.pi) * np.exp(-1j * (model.omega_e * t + np.pi / 4.0))
    return out if np.ndim(out) else complex(out)


def _ohmic_cauchy_moment(s: float, kappa: float, power: int) -> float:
    """Integral_0^inf x**s exp(-x) / (x - kappa)**power dx for kappa <= 0.

    Adaptive quadrature split at x = 1; the integrand is smooth for
    kappa < 0 and has an integrable x**(s-power) endpoint for kappa = 0
    (divergent when s <= power - 1, which the caller must gate).
    """

    def f(x):
        return x**s * np.exp(-x) / (x - kappa) ** power

    # split at the peak scale |kappa| so near-threshold integrands resolve
    cuts = [0.0, 1.0, np.inf]
    if 0.0 < -kappa < 1.0:
        cuts.insert(1, -kappa)
    total = 0.0
    error = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        piece, piece_err = quad(f, lo, hi, epsabs=0.0, epsrel=_QUAD_RELTOL, limit=200)
        total += piece
        error += piece_err
    if total != 0 and error > 1e-9 * abs(total):
        raise ConvergenceError(
            f"Ohmic moment quadrature error {error:.3e} exceeds budget at kappa={kappa}, s={s}"
        )
    return total


def level_shift_integral(model: SpectralModel, energy: float) -> float:
    """Integral_0^inf J(w)/(w - E) dw for E below the support of J.

    Ohmic class: eta_o * w_c * Integral x**s exp(-x)/(x - kappa) dx with
    kappa = E/w_c, by adaptive quadrature (E <= 0 required).  Band gap:
    exact value eta_p * w_e**1.5 / sqrt(w_e - E) for E < w_e, equivalent to
    quadrature after the substitution w = w_e + y**2 removes the edge.
    E inside the continuum would need a principal value and is out of scope.
    """
    if isinstance(model, OhmicClass):
        if energy > 0:
            raise ValueError("Ohmic level shift requires E <= 0 (below the continuum)")
        kappa = energy / model.omega_c
        return model.eta_o * model.omega_c * _ohmic_cauchy_moment(model.s, kappa, 1)
    if energy >= model.omega_e:
        raise ValueError("band-gap level shift requires E < omega_e (below the edge)")
    return model.eta_p * model.omega_e**1.5 / np.sqrt(model.omega_e - energy)


def mode_weight_integral(model: SpectralModel, energy: float) -> float:
    """Integral_0^inf J(w)/(w - E)**2 dw, the reservoir weight in the bound state.

    Ohmic class: eta_o * Integral x**s exp(-x)/(x - kappa)**2 dx (note no
    w_c factor); diverges at E = 0 for s <= 1.  Band gap: closed form
    eta_p * w_e**1.5 / (2 (w_e - E)**1.5).  Equals d/dE of
    :func:`level_shift_integral` on the shared domain.
    """
    if isinstance(model, OhmicClass):
        if energy > 0:
            raise ValueError("Ohmic mode weight requires E <= 0 (below the continuum)")
        if energy == 0 and model.s <= 1:
            raise ConvergenceError("mode-weight integral diverges at E = 0 for s <= 1")
        kappa = energy / model.omega_c
        return model.eta_o * _ohmic_cauchy_moment(model.s, kappa, 2)
    if energy >= model.omega_e:
        raise ValueError("band-gap mode weight requires E < omega_e (below the edge)")
    return model.eta_p * model.omega_e**1.5 / (2.0 * (model.omega_e - energy) ** 1.5)
