"""
Run configuration for the command-line front end.  Values come from built-in defaults, then an optional JSON config
file whose keys are RunConfig field names, then command-line flags, each layer overriding the previous one.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
from enum import IntEnum
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.counting.runplan import RunPlan
from photonics.weakvalues.fockengine.distinguishable import Labelling
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.runtimeconstants import WeakValuesRuntimeConstants
from photonics.weakvalues.utils.errors import WeakValuesError

log = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    GATE_VERIFICATION_FAILED = 1
    USAGE = 2
    MALFORMED_CONFIG = 3
    CONFLICTING_VALUES = 4
    OUT_OF_RANGE = 5
    UNDEFINED_QUANTITY = 6
    LIBRARY_ERROR = 7
    OUTPUT_ERROR = 8


class ConfigError(WeakValuesError):
    code = "config"

    def __init__(self, message: str, exit_code: ExitCode):
        super().__init__(message)
        self.exit_code = exit_code


SUBCOMMANDS = ("gate-verify", "povm", "weak-value", "fig2", "tomo")

DEFAULT_K = 0.006
DEFAULT_K_GRID = (0.006, 0.025, 0.05, 0.125, 0.25, 0.5, 0.75, 1.0)


@dataclass
class RunConfig:
    subcommand: str
    angle: float = 42.0
    K: Optional[float] = None
    k_grid: Optional[List[float]] = None
    visibility: float = 1.0
    depol: float = 0.0
    labelling: str = Labelling.PATH.value
    unpostselected_rate: float = 44.6
    postselected_rate: float = 0.52
    duration_K: float = 100.0
    duration_wv: float = 1000.0
    seed: int = 0
    output: Optional[str] = None
    workers: int = field(default_factory=lambda: WeakValuesRuntimeConstants.workers)
    n_states: int = 20
    project_psd: bool = False
    log_level: Optional[str] = None
    log_file: Optional[str] = None

    @property
    def psi(self) -> Polarization:
        return Polarization.from_angle(self.angle)

    @property
    def strength(self) -> float:
        return DEFAULT_K if self.K is None else self.K

    @property
    def strength_grid(self) -> List[float]:
        if self.k_grid is not None:
            return list(self.k_grid)
        if self.K is not None:
            return [self.K]
        return list(DEFAULT_K_GRID)

    @property
    def params(self) -> ImperfectionParams:
        return ImperfectionParams(self.visibility, self.depol, self.labelling)

    @property
    def plan(self) -> RunPlan:
        return RunPlan(
            unpostselected_rate=self.unpostselected_rate,
            postselected_rate=self.postselected_rate,
            duration_K=self.duration_K,
            duration_wv=self.duration_wv,
            seed=self.seed,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


CONFIG_KEYS = tuple(f.name for f in fields(RunConfig) if f.name != "subcommand")

_FLOAT_KEYS = {
    "angle",
    "K",
    "visibility",
    "depol",
    "unpostselected_rate",
    "postselected_rate",
    "duration_K",
    "duration_wv",
}
_INT_KEYS = {"seed", "workers", "n_states"}
_STRING_KEYS = {"labelling", "output", "log_level", "log_file"}


def parse_k_grid(raw: str) -> List[float]:
    try:
        return [float(token) for token in raw.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'Could not parse strength grid "{raw}" as comma-separated numbers')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="FILE", help="JSON file of RunConfig values, overridden by flags")
    common.add_argument("--angle", type=float, help="signal polarization angle in degrees (default 42)")
    common.add_argument("--K", type=float, help=f"measurement strength (default {DEFAULT_K})")
    common.add_argument("--k-grid", dest="k_grid", type=parse_k_grid, help="comma-separated measurement strengths")
    common.add_argument("--visibility", type=float, help="weight of the coherent device branch (default 1)")
    common.add_argument("--depol", type=float, help="white-noise weight after the device (default 0)")
    common.add_argument("--labelling", help="hidden-label model of the mismatched branch: path or photon")
    common.add_argument("--unpostselected-rate", dest="unpostselected_rate", type=float)
    common.add_argument("--postselected-rate", dest="postselected_rate", type=float)
    common.add_argument("--duration-K", dest="duration_K", type=float, help="calibration run duration in seconds")
    common.add_argument("--duration-wv", dest="duration_wv", type=float, help="weak-value run duration in seconds")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="output CSV path; metadata is written alongside with a .json suffix")
    common.add_argument("--workers", type=int, help="threads for strength-grid simulation")
    common.add_argument("--n-states", dest="n_states", type=int, help="random signal states per meter setting")
    common.add_argument("--project-psd", dest="project_psd", action="store_true", help="project chi onto PSD cone")
    common.add_argument("--log-level", dest="log_level")
    common.add_argument("--log-file", dest="log_file")

    parser = argparse.ArgumentParser(
        prog="weak-values",
        description="simulates postselected weak measurements of single-photon polarization",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    descriptions = {
        "gate-verify": "check the Fock-level device against the ideal conditioned two-qubit state",
        "povm": "print the meter POVM elements at a measurement strength",
        "weak-value": "print the expected postselected value of S1",
        "fig2": "simulate the counting experiment over a strength grid and write a CSV",
        "tomo": "reconstruct the device's process matrix and write it as CSV",
    }
    for name in SUBCOMMANDS:
        subparsers.add_parser(name, parents=[common], help=descriptions[name], description=descriptions[name])
    return parser


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in _FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError(f'expected a number for "{key}" (got {value!r})')
        return float(value)
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f'expected an integer for "{key}" (got {value!r})')
        return value
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            raise TypeError(f'expected a string for "{key}" (got {value!r})')
        return value
    if key == "k_grid":
        if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in value):
            raise TypeError(f'expected a list of numbers for "k_grid" (got {value!r})')
        return [float(x) for x in value]
    if key == "project_psd":
        if not isinstance(value, bool):
            raise TypeError(f'expected a boolean for "project_psd" (got {value!r})')
        return value
    raise KeyError(key)


def load_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path) as infile:
            content = json.load(infile)
    except OSError as err:
        raise ConfigError(f'Could not read config file "{path}": {err}', ExitCode.MALFORMED_CONFIG)
    except json.JSONDecodeError as err:
        raise ConfigError(f'Config file "{path}" is not valid JSON: {err}', ExitCode.MALFORMED_CONFIG)

    if not isinstance(content, dict):
        raise ConfigError(f'Config file "{path}" must contain a JSON object', ExitCode.MALFORMED_CONFIG)

    unknown = sorted(set(content) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(
            f'Config file "{path}" has unknown keys {unknown} (allowed: {list(CONFIG_KEYS)})', ExitCode.MALFORMED_CONFIG
        )

    try:
        return {key: _coerce(key, value) for key, value in content.items()}
    except TypeError as err:
        raise ConfigError(f'Config file "{path}" has a malformed value: {err}', ExitCode.MALFORMED_CONFIG)


def _check_range(condition: bool, message: str, exit_code: ExitCode = ExitCode.OUT_OF_RANGE):
    if not condition:
        raise ConfigError(message, exit_code)


def _is_strength(K: float) -> bool:
    return not math.isnan(K) and -1.0 < K <= 1.0


def validate_config(config: RunConfig) -> RunConfig:
    if config.subcommand not in SUBCOMMANDS:
        raise ConfigError(f'Unknown subcommand "{config.subcommand}"', ExitCode.USAGE)
    if config.K is not None and config.k_grid is not None:
        raise ConfigError("Specify either K or k_grid, not both", ExitCode.CONFLICTING_VALUES)

    _check_range(0.0 <= config.angle < 360.0, f"angle must lie in [0, 360) degrees (got {config.angle})")
    if config.K is not None:
        _check_range(_is_strength(config.K), f"K must lie in (-1, 1] (got {config.K})")
        if config.subcommand == "weak-value" and config.K == 0.0:
            raise ConfigError("The weak value is undefined at K = 0", ExitCode.UNDEFINED_QUANTITY)
    if config.k_grid is not None:
        _check_range(len(config.k_grid) > 0, "k_grid must contain at least one strength")
        _check_range(
            all(_is_strength(K) for K in config.k_grid), f"k_grid values must lie in (-1, 1] (got {config.k_grid})"
        )

    for name in ("visibility", "depol"):
        value = getattr(config, name)
        _check_range(0.0 <= value <= 1.0, f"{name} must lie in [0, 1] (got {value})")
    _check_range(
        config.labelling in {m.value for m in Labelling},
        f'labelling must be one of {[m.value for m in Labelling]} (got "{config.labelling}")',
    )
    for name in ("unpostselected_rate", "postselected_rate", "duration_K", "duration_wv"):
        value = getattr(config, name)
        _check_range(math.isfinite(value) and value >= 0, f"{name} must be finite and non-negative (got {value})")
    _check_range(config.seed >= 0, f"seed must be non-negative (got {config.seed})")
    _check_range(config.workers >= 1, f"workers must be at least 1 (got {config.workers})")
    _check_range(config.n_states >= 1, f"n_states must be at least 1 (got {config.n_states})")

    return config


def parse_config(args: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
    """
    Build a RunConfig from command-line arguments and an optional config file (also selectable with --config).  Usage
    errors exit through argparse; every other problem raises ConfigError carrying its exit code.
    """
    flags = vars(build_parser().parse_args(list(args)))
    subcommand = flags.pop("subcommand")
    config_file = flags.pop("config", config_file)

    values = load_config_file(config_file) if config_file else {}
    values.update(flags)
    log.debug(f"Resolved configuration values for {subcommand}: {values}")

    return validate_config(RunConfig(subcommand=subcommand, **values))
