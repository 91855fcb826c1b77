"""Parameter sweeps and 1-D maximization of asymptotic quantities.

A sweep walks one spectral parameter over a grid, solves the secular
equation at every point and reports the requested asymptotic quantity:
trapped population b**4, or the long-time discord / concurrence of a pure
two-qubit input evaluated at |c_infinity| = b**2.  Grid points are
independent, evaluated in a deterministic order (optionally by a process
pool) and points without a bound state contribute the value 0, so plotted
curves show the existence cutoff as a cliff.

Maximization is golden-section search inside a bracket, guarded by a
32-point pre-scan that checks unimodality (with a dense-grid fallback) and
detects flat objectives.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .boundstate import bound_state_exists, solve_secular
from .correlations import PureInput, discord_rank2, initial_concurrence
from .errors import NoMaximumError, QtrapError
from .spectral import FrequencyConvention, OhmicClass, PhotonicBandGap, SpectralModel

__all__ = ["SweepSpec", "SweepRow", "SweepResult", "MaximizeResult", "run_sweep", "maximize_quantity"]

QUANTITIES = ("p_infinity", "discord_infinity", "concurrence_infinity")
_OHMIC_PARAMETERS = ("eta_o", "s")
_BAND_GAP_PARAMETERS = ("eta_p", "omega_e")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_PRESCAN_POINTS = 32
_FALLBACK_POINTS = 512
_ARG_TOL = 1e-4


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep description.

    model supplies the fixed parameters (the swept field's value in it is
    ignored); parameter names the swept field; grid is an explicit
    strictly-increasing array (None when the spec only feeds
    :func:`maximize_quantity`); quantity selects what each row reports;
    pure_input is required for the correlation quantities.
    """

    model: SpectralModel
    parameter: str
    quantity: str
    grid: Optional[np.ndarray] = None
    convention: FrequencyConvention = FrequencyConvention()
    pure_input: Optional[PureInput] = None

    def __post_init__(self):
        allowed = _OHMIC_PARAMETERS if isinstance(self.model, OhmicClass) else _BAND_GAP_PARAMETERS
        if self.parameter not in allowed:
            raise ValueError(f"parameter {self.parameter!r} not sweepable for this family; allowed: {allowed}")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if self.quantity != "p_infinity" and self.pure_input is None:
            raise ValueError(f"{self.quantity} requires a pure_input")
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=float).reshape(-1)
            if grid.size < 1:
                raise ValueError("grid must contain at least one point")
            if np.any(np.diff(grid) <= 0):
                raise ValueError("grid must be strictly increasing")
            grid.setflags(write=False)
            object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class SweepRow:
    parameter: float
    value: float
    exists: bool
    energy: float
    b: float
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: List[SweepRow]


@dataclass(frozen=True)
class MaximizeResult:
    argmax: float
    value: float
    flat: bool = False


def _evaluate_point(spec: SweepSpec, value: float) -> SweepRow:
    model = replace(spec.model, **{spec.parameter: value})
    try:
        if not bound_state_exists(model, spec.convention):
            return SweepRow(value, 0.0, False, math.nan, math.nan)
        state = solve_secular(model, spec.convention)
        if state is None:
            return SweepRow(value, 0.0, False, math.nan, math.nan)
        if spec.quantity == "p_infinity":
            quantity = state.p_infinity
        elif spec.quantity == "discord_infinity":
            quantity = discord_rank2(spec.pure_input, state.b**2)
        else:
            quantity = state.b**2 * initial_concurrence(spec.pure_input)
        return SweepRow(value, quantity, True, state.energy, state.b)
    except QtrapError as exc:  # pragma: no cover - depends on pathological inputs
        return SweepRow(value, math.nan, False, math.nan, math.nan, error=str(exc))


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate the sweep grid; row order follows the grid regardless of jobs."""
    if spec.grid is None:
        raise ValueError("run_sweep needs a spec with a grid")
    values = [float(v) for v in spec.grid]
    if jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate_point, [spec] * len(values), values))
    else:
        rows = [_evaluate_point(spec, v) for v in values]
    return SweepResult(spec=spec, rows=rows)


def _objective(spec: SweepSpec, value: float) -> float:
    row = _evaluate_point(spec, value)
    return row.value if row.exists else 0.0


def maximize_quantity(spec: SweepSpec, lo: float, hi: float) -> MaximizeResult:
    """Golden-section maximum of the sweep quantity on [lo, hi].

    A 32-point pre-scan verifies the objective looks unimodal; otherwise a
    512-point grid localizes the global basin first.  Flat objectives
    (pre-scan variation at rounding level) short-circuit with flat=True.
    Raises :class:`~qtrap.errors.NoMaximumError` when no grid point in the
    bracket has a bound state.
    """
    if not hi > lo:
        raise ValueError("bracket must satisfy hi > lo")
    xs = np.linspace(lo, hi, _PRESCAN_POINTS)
    ys = np.array([_objective(spec, x) for x in xs])
    if not np.any(ys > 0.0):
        raise NoMaximumError(f"no bound state anywhere on the bracket [{lo}, {hi}]")

    scale = float(np.max(np.abs(ys)))
    if float(np.max(ys) - np.min(ys)) <= 1e-12 * max(1.0, scale):
        mid = 0.5 * (lo + hi)
        return MaximizeResult(argmax=mid, value=float(np.max(ys)), flat=True)

    if not _looks_unimodal(ys):
        xs = np.linspace(lo, hi, _FALLBACK_POINTS)
        ys = np.array([_objective(spec, x) for x in xs])

    peak = int(np.argmax(ys))
    left = xs[max(peak - 1, 0)]
    right = xs[min(peak + 1, len(xs) - 1)]
    x_best, y_best = _golden_section(lambda x: _objective(spec, x), left, right)
    if ys[peak] > y_best:
        x_best, y_best = float(xs[peak]), float(ys[peak])
    return MaximizeResult(argmax=x_best, value=y_best)


def _looks_unimodal(ys: Sequence[float], tol_scale: float = 1e-9) -> bool:
    ys = np.asarray(ys, dtype=float)
    tol = tol_scale * max(1.0, float(np.max(np.abs(ys))))
    peak = int(np.argmax(ys))
    rising = np.all(np.diff(ys[: peak + 1]) >= -tol)
    falling = np.all(np.diff(ys[peak:]) <= tol)
    return bool(rising and falling)


def _golden_section(fn, lo: float, hi: float):
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while (b - a) > _ARG_TOL:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
    x_best = x1 if f1 >= f2 else x2
    return float(x_best), float(max(f1, f2))
