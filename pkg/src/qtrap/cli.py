"""Command-line interface.

Subcommands mirror the library surface and write delimited tables (or JSON)
that the plotting package and the regression fixtures consume:

    qtrap bound-state   --config cfg --out out.csv   # E, b, trapped population
    qtrap evolve        --config cfg --out out.csv   # c(t) and the Bloch track
    qtrap sweep         --config cfg --out out.csv   # quantity vs parameter
    qtrap correlations  --config cfg --out out.csv   # concurrence/discord vs t

Configs are JSON objects or flat ``key = value`` files; unknown keys are
rejected.  CSV output is comma-separated UTF-8 with '\\n' newlines, a
``# config: ...`` comment echoing the validated configuration, and numbers
printed with 17 significant digits so they round-trip exactly.  Exit codes:
0 success, 2 invalid configuration or arguments, 3 numerical failure.  No
output file is left behind on a nonzero exit.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.special import gamma

from .boundstate import solve_secular
from .correlations import PureInput, correlation_series
from .dynamics import bloch_trajectory, evolve_amplitude
from .errors import QtrapError
from .spectral import FrequencyConvention, OhmicClass, PhotonicBandGap, SpectralModel
from .sweep import QUANTITIES, SweepSpec, maximize_quantity, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    """Configuration rejected (missing, unknown or ill-typed keys)."""


# ---------------------------------------------------------------------------
# config parsing and validation

_MODEL_KEYS = {
    "family": str,
    "eta_o": float,
    "s": float,
    "omega_c": float,
    "eta_p": float,
    "omega_e": float,
    "limit_mode": bool,
}

_SCHEMAS: Dict[str, Dict[str, type]] = {
    "bound-state": {**_MODEL_KEYS, "note": str},
    "evolve": {
        **_MODEL_KEYS,
        "t_max": float,
        "dt": float,
        "rho_pp": float,
        "rho_pm_re": float,
        "rho_pm_im": float,
        "note": str,
    },
    "sweep": {
        **_MODEL_KEYS,
        "parameter": str,
        "quantity": str,
        "grid": list,
        "grid_min": float,
        "grid_max": float,
        "grid_count": int,
        "curves": list,
        "maximize": bool,
        "bracket_lo": float,
        "bracket_hi": float,
        "alpha": float,
        "beta": float,
        "phi_plus": list,
        "phi_minus": list,
        "note": str,
    },
    "correlations": {
        **_MODEL_KEYS,
        "t_max": float,
        "dt": float,
        "alpha": float,
        "beta": float,
        "phi_plus": list,
        "phi_minus": list,
        "note": str,
    },
}


def _parse_flat(text: str) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            if "," in value:
                try:
                    out[key] = [float(part) for part in value.split(",")]
                except ValueError:
                    out[key] = value
            else:
                out[key] = value
    return out


def load_config(path: str) -> Dict[str, Any]:
    """Read a JSON or flat key=value config file."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return data
    return _parse_flat(text)


def validate_config(command: str, raw: Dict[str, Any]) -> Dict[str, Any]:
    """Enforce the subcommand schema; unknown keys are fatal."""
    schema = _SCHEMAS[command]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
    cfg: Dict[str, Any] = {}
    for key, value in raw.items():
        expected = schema[key]
        if expected is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"key {key!r} must be a number, got {value!r}")
            cfg[key] = float(value)
        elif expected is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
            cfg[key] = value
        elif expected is bool:
            if not isinstance(value, bool):
                raise ConfigError(f"key {key!r} must be a boolean, got {value!r}")
            cfg[key] = value
        elif expected is list:
            if not isinstance(value, list):
                raise ConfigError(f"key {key!r} must be a list, got {value!r}")
            cfg[key] = value
        else:
            if not isinstance(value, str):
                raise ConfigError(f"key {key!r} must be a string, got {value!r}")
            cfg[key] = value
    return cfg


def _build_model(cfg: Dict[str, Any]):
    family = cfg.get("family")
    if family not in ("ohmic", "photonic"):
        raise ConfigError("config must set family to 'ohmic' or 'photonic'")
    convention = FrequencyConvention(limit_mode=bool(cfg.get("limit_mode", False)))
    try:
        if family == "ohmic":
            foreign = [k for k in ("eta_p", "omega_e") if k in cfg]
            if foreign:
                raise ConfigError(f"keys {foreign} are not valid for family ohmic")
            missing = [k for k in ("eta_o", "s", "omega_c") if k not in cfg]
            if missing:
                raise ConfigError(f"family ohmic requires keys {missing}")
            model: SpectralModel = OhmicClass(cfg["eta_o"], cfg["s"], cfg["omega_c"])
        else:
            foreign = [k for k in ("eta_o", "s", "omega_c", "limit_mode") if k in cfg]
            if foreign:
                raise ConfigError(f"keys {foreign} are not valid for family photonic")
            missing = [k for k in ("eta_p", "omega_e") if k not in cfg]
            if missing:
                raise ConfigError(f"family photonic requires keys {missing}")
            model = PhotonicBandGap(cfg["eta_p"], cfg["omega_e"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return model, convention


def _build_pure_input(cfg: Dict[str, Any]) -> PureInput:
    missing = [k for k in ("alpha", "beta", "phi_plus", "phi_minus") if k not in cfg]
    if missing:
        raise ConfigError(f"pure-state input requires keys {missing}")

    def vec(key):
        raw = cfg[key]
        if len(raw) != 4:
            raise ConfigError(f"{key} must hold 4 numbers [re0, im0, re1, im1]")
        values = [float(v) for v in raw]
        return np.array([values[0] + 1j * values[1], values[2] + 1j * values[3]])

    try:
        return PureInput(float(cfg["alpha"]), float(cfg["beta"]), vec("phi_plus"), vec("phi_minus"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_qubit_state(cfg: Dict[str, Any]) -> np.ndarray:
    pop = float(cfg.get("rho_pp", 1.0))
    coher = float(cfg.get("rho_pm_re", 0.0)) + 1j * float(cfg.get("rho_pm_im", 0.0))
    if not 0.0 <= pop <= 1.0:
        raise ConfigError("rho_pp must lie in [0, 1]")
    if abs(coher) ** 2 > pop * (1.0 - pop) + 1e-12:
        raise ConfigError("initial coherence violates positivity: |rho_pm|^2 <= rho_pp (1 - rho_pp)")
    return np.array([[pop, coher], [np.conj(coher), 1.0 - pop]], dtype=complex)


# ---------------------------------------------------------------------------
# output helpers

def _fmt(value: Any) -> Any:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (np.floating,)):
        return f"{float(value):.17g}"
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _config_comment(command: str, cfg: Dict[str, Any]) -> List[str]:
    return [f"qtrap {command}", "config: " + json.dumps(cfg, sort_keys=True)]


def _render_csv(comments: Sequence[str], header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    for line in comments:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buffer.getvalue()


def _render_json(command: str, cfg: Dict[str, Any], payload: Dict[str, Any]) -> str:
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [clean(v) for v in obj]
        if isinstance(obj, (np.floating, float)):
            value = float(obj)
            return None if math.isnan(value) else value
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.bool_,)):
            return bool(obj)
        return obj

    return json.dumps({"command": command, "config": cfg, **clean(payload)}, indent=1) + "\n"


def _write_atomic(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".qtrap-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


# ---------------------------------------------------------------------------
# subcommands

def cmd_bound_state(cfg: Dict[str, Any], out: Optional[str], fmt: str, jobs: int) -> int:
    model, convention = _build_model(cfg)
    state = solve_secular(model, convention)
    record = {
        "exists": state is not None,
        "E": state.energy if state else math.nan,
        "b": state.b if state else math.nan,
        "p_infinity": state.p_infinity if state else 0.0,
        "residual": state.residual if state else math.nan,
    }
    if fmt == "json":
        text = _render_json("bound-state", cfg, {"record": record})
    else:
        header = ["exists", "E", "b", "p_infinity", "residual"]
        text = _render_csv(_config_comment("bound-state", cfg), header, [[record[k] for k in header]])
    _write_atomic(out, text)
    return EXIT_OK


def cmd_evolve(cfg: Dict[str, Any], out: Optional[str], fmt: str, jobs: int) -> int:
    model, convention = _build_model(cfg)
    if "t_max" not in cfg:
        raise ConfigError("evolve requires t_max")
    rho0 = _build_qubit_state(cfg)
    try:
        traj = evolve_amplitude(model, convention, t_max=cfg["t_max"], dt=cfg.get("dt"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    bloch = np.asarray(bloch_trajectory(traj, rho0), dtype=float)
    header = ["t", "re_c", "im_c", "abs_c2", "x", "y", "z"]
    columns = np.column_stack(
        [
            traj.times,
            traj.amplitudes.real,
            traj.amplitudes.imag,
            np.abs(traj.amplitudes) ** 2,
            bloch,
        ]
    )
    if fmt == "json":
        rows = [dict(zip(header, map(float, row))) for row in columns]
        text = _render_json("evolve", cfg, {"rows": rows})
    else:
        text = _render_csv(_config_comment("evolve", cfg), header, columns.tolist())
    _write_atomic(out, text)
    return EXIT_OK


def _sweep_grid(cfg: Dict[str, Any]) -> np.ndarray:
    if "grid" in cfg:
        if any(k in cfg for k in ("grid_min", "grid_max", "grid_count")):
            raise ConfigError("give either an explicit grid or grid_min/grid_max/grid_count, not both")
        grid = np.asarray([float(v) for v in cfg["grid"]], dtype=float)
        if grid.size < 1:
            raise ConfigError("grid must contain at least one point")
        return grid
    missing = [k for k in ("grid_min", "grid_max", "grid_count") if k not in cfg]
    if missing:
        raise ConfigError(f"sweep requires a grid: missing {missing}")
    if cfg["grid_count"] < 2:
        raise ConfigError("grid_count must be at least 2")
    if not cfg["grid_max"] > cfg["grid_min"]:
        raise ConfigError("grid_max must exceed grid_min")
    return np.linspace(cfg["grid_min"], cfg["grid_max"], cfg["grid_count"])


def _curve_configs(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Expand the optional curves list into per-curve model configs."""
    base = {k: cfg[k] for k in _MODEL_KEYS if k in cfg}
    curves = cfg.get("curves")
    if curves is None:
        return [{"label": "curve", **base}]
    expanded = []
    for index, entry in enumerate(curves):
        if not isinstance(entry, dict):
            raise ConfigError("each curves entry must be an object")
        unknown = sorted(set(entry) - set(_MODEL_KEYS) - {"label"})
        if unknown:
            raise ConfigError(f"curve {index}: unknown keys {unknown}")
        label = entry.get("label", f"curve{index}")
        merged = {**base, **{k: v for k, v in entry.items() if k != "label"}}
        expanded.append({"label": str(label), **merged})
    return expanded


def _existence_boundary(model: SpectralModel, convention: FrequencyConvention, parameter: str) -> Optional[float]:
    """Critical coupling for an eta_o sweep (the cliff abscissa), if defined."""
    if isinstance(model, OhmicClass) and parameter == "eta_o" and not convention.limit_mode:
        return convention.omega_0 / (model.omega_c * gamma(model.s))
    return None


def cmd_sweep(cfg: Dict[str, Any], out: Optional[str], fmt: str, jobs: int) -> int:
    if "parameter" not in cfg or "quantity" not in cfg:
        raise ConfigError("sweep requires parameter and quantity")
    if cfg["quantity"] not in QUANTITIES:
        raise ConfigError(f"quantity must be one of {QUANTITIES}")
    pure = _build_pure_input(cfg) if cfg["quantity"] != "p_infinity" else None
    grid = _sweep_grid(cfg)
    maximize = bool(cfg.get("maximize", False))
    if maximize and ("bracket_lo" not in cfg or "bracket_hi" not in cfg):
        raise ConfigError("maximize requires bracket_lo and bracket_hi")
    if maximize and cfg.get("curves"):
        raise ConfigError("maximize supports single-curve sweeps only")

    comments = _config_comment("sweep", cfg)
    header = ["label", "param", "value", "exists", "E", "b", "error"]
    rows: List[List[Any]] = []
    json_rows: List[Dict[str, Any]] = []
    boundaries: Dict[str, float] = {}
    optimum: Optional[Dict[str, Any]] = None

    for curve_cfg in _curve_configs(cfg):
        label = curve_cfg.pop("label")
        model, convention = _build_model(curve_cfg)
        try:
            spec = SweepSpec(
                model=model,
                parameter=cfg["parameter"],
                quantity=cfg["quantity"],
                grid=grid,
                convention=convention,
                pure_input=pure,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        boundary = _existence_boundary(model, convention, cfg["parameter"])
        if boundary is not None:
            boundaries[label] = boundary
            comments.append(f"existence_boundary[{label}]: {boundary:.17g}")
        result = run_sweep(spec, jobs=jobs)
        for row in result.rows:
            rows.append([label, row.parameter, row.value, row.exists, row.energy, row.b, row.error])
            json_rows.append(
                {
                    "label": label,
                    "param": row.parameter,
                    "value": row.value,
                    "exists": row.exists,
                    "E": row.energy,
                    "b": row.b,
                    "error": row.error,
                }
            )
        if maximize:
            best = maximize_quantity(spec, cfg["bracket_lo"], cfg["bracket_hi"])
            optimum = {"argmax": best.argmax, "max": best.value, "flat": best.flat}
            comments.append(
                f"optimum[{label}]: argmax={best.argmax:.17g} max={best.value:.17g} flat={int(best.flat)}"
            )
            rows.append(["optimum", best.argmax, best.value, True, math.nan, math.nan, ""])

    if fmt == "json":
        payload: Dict[str, Any] = {"rows": json_rows, "boundaries": boundaries}
        if optimum is not None:
            payload["optimum"] = optimum
        text = _render_json("sweep", cfg, payload)
    else:
        text = _render_csv(comments, header, rows)
    _write_atomic(out, text)
    return EXIT_OK


def cmd_correlations(cfg: Dict[str, Any], out: Optional[str], fmt: str, jobs: int) -> int:
    model, convention = _build_model(cfg)
    if "t_max" not in cfg:
        raise ConfigError("correlations requires t_max")
    pure = _build_pure_input(cfg)
    try:
        traj = evolve_amplitude(model, convention, t_max=cfg["t_max"], dt=cfg.get("dt"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    series = correlation_series(pure, traj)
    header = ["t", "abs_c2", "concurrence", "discord"]
    columns = np.column_stack([series.times, series.abs_c_squared, series.concurrence, series.discord])
    if fmt == "json":
        rows = [dict(zip(header, map(float, row))) for row in columns]
        text = _render_json("correlations", cfg, {"rows": rows})
    else:
        text = _render_csv(_config_comment("correlations", cfg), header, columns.tolist())
    _write_atomic(out, text)
    return EXIT_OK


_HANDLERS = {
    "bound-state": cmd_bound_state,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "correlations": cmd_correlations,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtrap", description="Qubit decay in structured reservoirs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("bound-state", "solve the secular equation and report the trapped population"),
        ("evolve", "integrate the amplitude equation and emit the Bloch track"),
        ("sweep", "sweep a spectral parameter (optionally locate its optimum)"),
        ("correlations", "time series of two-qubit concurrence and discord"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON or key=value parameter file")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = validate_config(args.command, load_config(args.config))
        return _HANDLERS[args.command](cfg, args.out, args.format, args.jobs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QtrapError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
