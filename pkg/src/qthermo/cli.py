"""Command-line interface.

    qthermo run <two-qubit|dissipative> [flags]
    qthermo sweep <config-file>

Flag values override config-file values, which override the documented
defaults. Config files are flat UTF-8 ``key = value`` text with ``#``
comments; a sweep file additionally names one parameter via ``sweep =
<key>`` and gives that key a comma-separated value list.

Exit codes: 0 success, 1 configuration/validation error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, NumericalFailureError, ValidationError
from .scenarios import (
    DEFINITIONS,
    FORMATS,
    SCENARIOS,
    ScenarioConfig,
    Tolerances,
    emit_run,
    fmt_value,
    run_scenario,
)

KEY_TYPES = {
    "scenario": str,
    "p": float,
    "c": complex,
    "g": float,
    "omega0": float,
    "gamma": float,
    "nbar": float,
    "t_max": float,
    "steps": int,
    "frame": str,
    "definitions": str,
    "out": str,
    "format": str,
    "crosscheck": bool,
    "plot": bool,
    "sweep": str,
    "tol_first_law": float,
    "tol_first_law_alicki": float,
    "tol_crosscheck": float,
    "tol_degeneracy": float,
}

SWEEPABLE = ("p", "c", "g", "omega0", "gamma", "nbar", "t_max", "steps")

# flags that make no sense for a given scenario are rejected, not ignored
FORBIDDEN_KEYS = {"two-qubit": ("gamma", "nbar"), "dissipative": ("g",)}

_BOOL_WORDS = {"true": True, "yes": True, "1": True,
               "false": False, "no": False, "0": False}


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise ConfigError(message)


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qthermo",
                     description="Qubit thermodynamics simulator: heat and work "
                                 "under eigenbasis-resolved and Alicki accounting.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one scenario")
    run.add_argument("scenario", choices=SCENARIOS)
    run.add_argument("--config", metavar="FILE", help="key = value config file")
    run.add_argument("--p", type=float, help="initial excited-level population")
    run.add_argument("--c", type=_complex_arg, help="initial coherence, |c| <= sqrt(p(1-p))")
    run.add_argument("--g", type=float, help="dispersive coupling (two-qubit)")
    run.add_argument("--omega0", type=float, help="qubit transition frequency")
    run.add_argument("--gamma", type=float, help="dissipation rate (dissipative)")
    run.add_argument("--nbar", type=float, help="reservoir mean excitation (dissipative)")
    run.add_argument("--t-max", type=float, help="grid end in units of gt (or gamma*t)")
    run.add_argument("--steps", type=int, help="number of grid steps")
    run.add_argument("--frame", choices=("interaction", "lab"))
    run.add_argument("--definitions", choices=DEFINITIONS)
    run.add_argument("--out", help="output path prefix; no files are written without it")
    run.add_argument("--format", choices=FORMATS)
    run.add_argument("--crosscheck", action="store_true", default=None,
                     help="cross-check against the independent numeric evolution")
    run.add_argument("--plot", action="store_true", default=None,
                     help="render PNG figures next to the series files")

    sweep = sub.add_parser("sweep", help="execute a parameter sweep from a config file")
    sweep.add_argument("config", metavar="FILE")
    return parser


def _coerce(key: str, raw: str):
    if key not in KEY_TYPES:
        raise ConfigError(f"unknown configuration key '{key}'")
    typ = KEY_TYPES[key]
    if typ is bool:
        word = raw.strip().lower()
        if word not in _BOOL_WORDS:
            raise ConfigError(f"invalid boolean for '{key}': {raw!r}")
        return _BOOL_WORDS[word]
    try:
        if typ is complex:
            return complex(raw.replace(" ", ""))
        return typ(raw)
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': {raw!r}")


def parse_config_file(path) -> dict[str, str]:
    """Read a flat key = value file; returns raw strings keyed by name."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw: dict[str, str] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
        if key not in KEY_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown configuration key '{key}'")
        raw[key] = value
    return raw


def _build_config(scenario: str, file_raw: dict[str, str], cli_vals: dict) -> ScenarioConfig:
    merged = {key: _coerce(key, value) for key, value in file_raw.items()}
    merged.pop("scenario", None)  # the run positional wins
    if "sweep" in merged:
        raise ConfigError("'sweep' is only valid in files passed to the sweep command")
    merged.update({key: value for key, value in cli_vals.items() if value is not None})

    for key in FORBIDDEN_KEYS.get(scenario, ()):
        if key in merged:
            raise ConfigError(f"'{key}' is not a valid parameter for scenario '{scenario}'")

    tol_kwargs = {}
    for tol_key, field_name in (("tol_first_law", "first_law"),
                                ("tol_first_law_alicki", "first_law_alicki"),
                                ("tol_crosscheck", "crosscheck"),
                                ("tol_degeneracy", "degeneracy")):
        if tol_key in merged:
            tol_kwargs[field_name] = merged.pop(tol_key)
    return ScenarioConfig(scenario=scenario, tolerances=Tolerances(**tol_kwargs), **merged)


_RUN_KEYS = ("p", "c", "g", "omega0", "gamma", "nbar", "t_max", "steps",
             "frame", "definitions", "out", "format", "crosscheck", "plot")


def _config_from_run_args(ns: argparse.Namespace) -> ScenarioConfig:
    file_raw = parse_config_file(ns.config) if ns.config else {}
    cli_vals = {key: getattr(ns, key) for key in _RUN_KEYS}
    return _build_config(ns.scenario, file_raw, cli_vals)


def parse_config(argv) -> ScenarioConfig:
    """Resolve a full CLI argument list into a validated ScenarioConfig."""
    ns = build_parser().parse_args(list(argv))
    if ns.command != "run":
        raise ConfigError("parse_config expects a 'run' invocation")
    return _config_from_run_args(ns)


def load_sweep(path) -> list[tuple[str, object, ScenarioConfig]]:
    """Expand a sweep file into (label, swept value, config) runs."""
    raw = parse_config_file(path)
    if "scenario" not in raw:
        raise ConfigError("sweep config must set 'scenario'")
    scenario = raw.pop("scenario")
    sweep_key = raw.pop("sweep", None)
    if sweep_key is None:
        return [("", None, _build_config(scenario, raw, {}))]
    sweep_key = sweep_key.strip().lower()
    if sweep_key not in SWEEPABLE:
        raise ConfigError(f"cannot sweep '{sweep_key}'; choose one of {SWEEPABLE}")
    if sweep_key not in raw:
        raise ConfigError(f"sweep parameter '{sweep_key}' has no value list")
    items = [item.strip() for item in raw.pop(sweep_key).split(",") if item.strip()]
    if not items:
        raise ConfigError(f"sweep parameter '{sweep_key}' has an empty value list")
    runs = []
    for i, item in enumerate(items):
        file_raw = dict(raw)
        file_raw[sweep_key] = item
        runs.append((f"_{sweep_key}{i}", _coerce(sweep_key, item),
                     _build_config(scenario, file_raw, {})))
    return runs


def _execute(cfg: ScenarioConfig, label: str = "") -> None:
    result = run_scenario(cfg)
    for key, value in result.summary.items():
        print(f"{key} = {fmt_value(value)}")
    if cfg.out:
        prefix = Path(cfg.out)
        if label:
            prefix = prefix.with_name(prefix.name + label)
        paths = emit_run(result, cfg, prefix)
        if cfg.plot:
            from . import plotting  # import only when figures are requested

            paths += plotting.render_run_figures(result, prefix)
        for path in paths:
            print(f"wrote {path}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command == "run":
            _execute(_config_from_run_args(ns))
        else:
            for label, value, cfg in load_sweep(ns.config):
                if label:
                    print(f"--- sweep{label}: {fmt_value(value)} ---")
                _execute(cfg, label)
        return 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
