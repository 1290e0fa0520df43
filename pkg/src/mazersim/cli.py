"""Command-line front end: config parsing, sweep/beam/peak runs, CSV output.

Exit codes: 0 on success, 1 for configuration problems, 2 for solver
failures.  All diagnostics go to stderr; the CSV artifact is the only
thing written to the output path.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .beams import default_beam_grid, filter_distribution, maxwell_boltzmann
from .core import ModelParams
from .observables import (
    DEFAULT_PROMINENCE,
    DEFAULT_SEGMENTS,
    SWEEP_AXES,
    find_peaks,
    jc_emission_probability,
    observable_function,
    refine_peaks,
    sweep,
    width_in_hz,
)
from .scattering import SolverError

COMMANDS = ("sweep-length", "sweep-detuning", "sweep-k", "transmission-scan",
            "beam-filter", "find-peaks", "jc-compare")
COMMAND_AXES = {
    "sweep-length": "kappa_L",
    "sweep-detuning": "delta_over_g",
    "sweep-k": "k_over_kappa",
    "transmission-scan": "delta_over_g",
    "jc-compare": "kappa_L",
}
SWEEP_COLUMNS = ("coordinate", "R_a", "T_a", "R_b", "T_b", "P_em", "T_total")

_FLOAT_KEYS = ("k_over_kappa", "delta_over_g", "kappa_l", "g_hz", "mass_kg",
               "k0_over_kappa", "min_prominence")
_INT_KEYS = ("n", "segments")
_STR_KEYS = ("mode", "axis", "field", "out", "plot")
_BOOL_KEYS = ("refine",)
_ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS + _BOOL_KEYS + ("grid",)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; config problems must be 1
    def error(self, message):
        raise ConfigError(message)


def parse_grid_spec(text: str) -> np.ndarray:
    """Grid from "start:stop:count" or an explicit comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 2:
                raise ValueError("grid count must be at least 2")
            return np.linspace(start, stop, count)
        values = np.array([float(v) for v in text.split(",") if v.strip()])
        if values.size == 0:
            raise ValueError("empty grid list")
        return values
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}") from None


def read_config_file(path) -> dict:
    """Plain `key = value` lines; '#' starts a comment; keys match the
    command-line flag names with dashes or underscores."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`")
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _ALL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _convert(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key in _BOOL_KEYS:
            low = value.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError("expected a boolean")
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    return value


def _merge_options(args: argparse.Namespace) -> dict:
    opts = {key: None for key in _ALL_KEYS}
    if args.config:
        opts.update(read_config_file(args.config))
    for key in _ALL_KEYS:
        cli_value = getattr(args, key, None)
        if cli_value is not None and cli_value is not False:
            opts[key] = cli_value
    return {key: _convert(key, value) for key, value in opts.items()}


def _normalize_axis(value: str) -> str:
    canon = value.strip().replace("-", "_")
    for axis in SWEEP_AXES:
        if canon.lower() == axis.lower():
            return axis
    raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {value!r}")


def build_params(opts: dict, default_k: float | None = None) -> ModelParams:
    k = opts.get("k_over_kappa")
    if k is None:
        k = default_k
    if k is None:
        raise ConfigError("k_over_kappa is required (flag --k-over-kappa or config)")
    try:
        return ModelParams(
            k_over_kappa=k,
            delta_over_g=opts.get("delta_over_g") or 0.0,
            n_photons=opts.get("n") or 0,
            kappa_L=opts.get("kappa_l") or 0.0,
            mode=opts.get("mode") or "mesa",
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _write_csv(path, command: str, settings: dict, columns, rows):
    lines = [f"# command: {command}", f"# version: {__version__}",
             f"# timestamp: {datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')}"]
    for key, value in settings.items():
        if value is not None:
            lines.append(f"# {key}: {value}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(row))
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def _require_out(opts) -> str:
    out = opts.get("out")
    if not out:
        raise ConfigError("an output path is required (flag --out or config `out`)")
    return out


def _require_grid(opts) -> np.ndarray:
    if not opts.get("grid"):
        raise ConfigError("a grid is required (flag --grid or config `grid`)")
    return parse_grid_spec(opts["grid"])


def _param_settings(params: ModelParams, opts) -> dict:
    settings = {
        "k_over_kappa": _fmt(params.k_over_kappa),
        "delta_over_g": _fmt(params.delta_over_g),
        "n": params.n_photons,
        "kappa_l": _fmt(params.kappa_L),
        "mode": params.mode,
        "grid": opts.get("grid"),
        "segments": opts.get("segments") or DEFAULT_SEGMENTS,
    }
    for key in ("g_hz", "mass_kg"):
        if opts.get(key) is not None:
            settings[key] = _fmt(opts[key])
    return settings


def _warn_row_errors(table):
    if table.errors:
        first = min(table.errors)
        print(f"warning: {len(table.errors)} grid point(s) failed to solve "
              f"(first at row {first}: {table.errors[first]})", file=sys.stderr)


def run_sweep_command(command: str, opts: dict) -> int:
    axis = COMMAND_AXES[command]
    params = build_params(opts)
    grid = _require_grid(opts)
    out = _require_out(opts)
    segments = opts.get("segments") or DEFAULT_SEGMENTS
    try:
        table = sweep(params, axis, grid, n_segments=segments)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _warn_row_errors(table)
    rows = []
    for i in range(len(table)):
        rows.append([_fmt(table.coordinates[i])] +
                    [_fmt(table.column(name)[i]) for name in SWEEP_COLUMNS[1:]])
    settings = _param_settings(params, opts)
    settings["axis"] = axis
    _write_csv(out, command, settings, SWEEP_COLUMNS, rows)
    if opts.get("plot"):
        from .plotting import save_sweep_plot
        fields = ("T_total",) if command == "transmission-scan" else ("P_em", "T_total")
        save_sweep_plot(table, opts["plot"], fields=fields)
    return 0


def run_jc_compare(opts: dict) -> int:
    params = build_params(opts)
    grid = _require_grid(opts)
    out = _require_out(opts)
    segments = opts.get("segments") or DEFAULT_SEGMENTS
    try:
        table = sweep(params, "kappa_L", grid, n_segments=segments)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _warn_row_errors(table)
    jc = [jc_emission_probability(replace(params, kappa_L=float(x))) for x in grid]
    rows = [[_fmt(grid[i]), _fmt(table.P_em[i]), _fmt(jc[i])]
            for i in range(len(table))]
    settings = _param_settings(params, opts)
    settings["axis"] = "kappa_L"
    _write_csv(out, "jc-compare", settings, ("coordinate", "P_em", "P_jc"), rows)
    if opts.get("plot"):
        from .plotting import save_jc_plot
        save_jc_plot(table, jc, opts["plot"])
    return 0


def run_beam_filter(opts: dict) -> int:
    k0 = opts.get("k0_over_kappa")
    if k0 is None:
        raise ConfigError("k0_over_kappa is required for beam-filter")
    params = build_params(opts, default_k=k0)
    out = _require_out(opts)
    if opts.get("grid"):
        grid = parse_grid_spec(opts["grid"])
    else:
        grid = default_beam_grid(k0, params)
    try:
        initial = maxwell_boltzmann(k0, grid)
        final = filter_distribution(initial, params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [[_fmt(grid[i]), _fmt(initial.weights[i]), _fmt(final.weights[i])]
            for i in range(grid.size)]
    settings = _param_settings(params, opts)
    settings["k0_over_kappa"] = _fmt(k0)
    _write_csv(out, "beam-filter", settings, ("k_over_kappa", "P_i", "P_f"), rows)
    if opts.get("plot"):
        from .plotting import save_beam_plot
        save_beam_plot(initial, final, opts["plot"])
    return 0


def run_find_peaks(opts: dict) -> int:
    axis = _normalize_axis(opts.get("axis") or "kappa_L")
    field = opts.get("field") or "P_em"
    params = build_params(opts)
    grid = _require_grid(opts)
    out = _require_out(opts)
    segments = opts.get("segments") or DEFAULT_SEGMENTS
    prominence = opts.get("min_prominence")
    if prominence is None:
        prominence = DEFAULT_PROMINENCE
    try:
        table = sweep(params, axis, grid, n_segments=segments)
        peaks = find_peaks(table, min_prominence=prominence, field=field)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _warn_row_errors(table)
    if opts.get("refine") and peaks:
        fn = observable_function(params, axis, field=field, n_segments=segments)
        peaks = refine_peaks(peaks, fn, bounds=(float(grid[0]), float(grid[-1])))
    g_hz = opts.get("g_hz")
    columns = ["position", "amplitude", "fwhm", "partial"]
    with_hz = g_hz is not None and axis == "delta_over_g"
    if with_hz:
        columns.append("fwhm_hz")
    rows = []
    for p in peaks:
        row = [_fmt(p.position), _fmt(p.amplitude), _fmt(p.fwhm), str(int(p.partial))]
        if with_hz:
            row.append(_fmt(width_in_hz(p.fwhm, g_hz)))
        rows.append(row)
    settings = _param_settings(params, opts)
    settings.update(axis=axis, field=field, min_prominence=_fmt(prominence),
                    refine=int(bool(opts.get("refine"))))
    _write_csv(out, "find-peaks", settings, columns, rows)
    if opts.get("plot"):
        from .plotting import save_peaks_plot
        save_peaks_plot(table, peaks, opts["plot"], field=field)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="mazersim",
                     description="Scattering of slow two-level atoms through "
                                 "a single-mode cavity: sweeps, resonance "
                                 "analysis and beam filtering.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("--config", help="key = value parameter file; flags win")
        p.add_argument("--k-over-kappa", dest="k_over_kappa")
        p.add_argument("--delta-over-g", dest="delta_over_g")
        p.add_argument("--n", dest="n")
        p.add_argument("--kappa-l", dest="kappa_l")
        p.add_argument("--mode", dest="mode",
                       help="mesa | sech2 | sin2 | custom:PATH")
        p.add_argument("--grid", dest="grid", help="start:stop:count or v1,v2,...")
        p.add_argument("--segments", dest="segments")
        p.add_argument("--out", dest="out")
        p.add_argument("--plot", dest="plot",
                       help="also render a figure of the run to this path")
        p.add_argument("--g-hz", dest="g_hz")
        p.add_argument("--mass-kg", dest="mass_kg")
        if command == "beam-filter":
            p.add_argument("--k0-over-kappa", dest="k0_over_kappa")
        if command == "find-peaks":
            p.add_argument("--axis", dest="axis")
            p.add_argument("--field", dest="field")
            p.add_argument("--min-prominence", dest="min_prominence")
            p.add_argument("--refine", dest="refine", action="store_true",
                           default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        opts = _merge_options(args)
        if args.command in COMMAND_AXES and args.command != "jc-compare":
            return run_sweep_command(args.command, opts)
        if args.command == "jc-compare":
            return run_jc_compare(opts)
        if args.command == "beam-filter":
            return run_beam_filter(opts)
        return run_find_peaks(opts)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
