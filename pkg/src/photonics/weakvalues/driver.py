#
# Command-line driver
# ===================
#
# Dispatches one of the registered subcommands:
#
# - gate-verify: Fock-level device vs. the ideal conditioned two-qubit state over a grid of meter settings
# - povm:        meter POVM elements at a measurement strength
# - weak-value:  expected postselected value of S1 (ideal closed form, or the imperfect-device model)
# - fig2:        counting-experiment simulation over a strength grid -> CSV + JSON metadata
# - tomo:        process matrix of the (imperfect) device -> CSV + JSON metadata
#
# Output paths default to WEAKVALUES_OUTPUT_DIR.  Exit codes are listed in photonics.weakvalues.config.ExitCode.
#
import logging
import os
import sys
from datetime import datetime
from typing import Callable
from typing import Dict
from typing import List

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.povm import povm_elements
from photonics.weakvalues.analytic.weakvalues import postselected_probs
from photonics.weakvalues.analytic.weakvalues import weak_value_analytic
from photonics.weakvalues.config import ConfigError
from photonics.weakvalues.config import ExitCode
from photonics.weakvalues.config import parse_config
from photonics.weakvalues.config import RunConfig
from photonics.weakvalues.counting.export import atomic_output
from photonics.weakvalues.counting.export import dumps_metadata
from photonics.weakvalues.counting.export import package_versions
from photonics.weakvalues.counting.fig2 import run_fig2
from photonics.weakvalues.device.equivalence import verify_gate
from photonics.weakvalues.imperfection.channel import imperfect_channel
from photonics.weakvalues.imperfection.model import model_postselection
from photonics.weakvalues.imperfection.model import model_weak_value
from photonics.weakvalues.imperfection.tomography import process_tomography
from photonics.weakvalues.runtimeconstants import WeakValuesRuntimeConstants
from photonics.weakvalues.utils import configure_logging
from photonics.weakvalues.utils import parse_log_level
from photonics.weakvalues.utils.errors import DivergentWeakValueError
from photonics.weakvalues.utils.errors import IndeterminateStrengthError
from photonics.weakvalues.utils.errors import PostselectionImpossibleError
from photonics.weakvalues.utils.errors import WeakValuesError
from photonics.weakvalues.utils.misc import get_human_readable_elapsed_since
from photonics.weakvalues.utils.misc import array_summary
from photonics.weakvalues.utils.misc import limit_log_length

log = logging.getLogger(__name__)

UNDEFINED_QUANTITY_ERRORS = (IndeterminateStrengthError, PostselectionImpossibleError, DivergentWeakValueError)


def _progress_enabled() -> bool:
    return not WeakValuesRuntimeConstants.disable_progress and logging.getLogger().isEnabledFor(logging.INFO)


def _output_paths(config: RunConfig, default_name: str) -> List[str]:
    csv_path = config.output or os.path.join(WeakValuesRuntimeConstants.output_dir, default_name)
    return [csv_path, os.path.splitext(csv_path)[0] + ".json"]


def _format_diagonal(matrix: np.ndarray) -> str:
    if np.allclose(matrix, np.diag(np.diag(matrix))):
        return "diag(" + ", ".join(f"{x.real:.6g}" for x in np.diag(matrix)) + ")"
    return array_summary(matrix)


def run_gate_verify(config: RunConfig, written: List[str]) -> int:
    report = verify_gate(n_states=config.n_states, seed=config.seed, progress=_progress_enabled())
    print(f"max infidelity: {report.max_infidelity:.3e}")
    print(f"max success-probability deviation: {report.max_success_deviation:.3e}")
    if not report.passed:
        log.error(f"Gate verification failed (tolerance {report.tolerance:g})")
        return ExitCode.GATE_VERIFICATION_FAILED
    return ExitCode.OK


def run_povm(config: RunConfig, written: List[str]) -> int:
    meter = MeterSetting.from_strength(config.strength)
    povm = povm_elements(meter)
    print(f"K = {meter.K:.6g} (gamma = {meter.gamma:.6g})")
    print(f"Pi_H = {_format_diagonal(povm.pi_H)}")
    print(f"Pi_V = {_format_diagonal(povm.pi_V)}")
    return ExitCode.OK


def run_weak_value(config: RunConfig, written: List[str]) -> int:
    psi, meter, params = config.psi, MeterSetting.from_strength(config.strength), config.params

    if params.is_ideal:
        weak_value = weak_value_analytic(psi, meter)
        p_post = postselected_probs(psi, meter).p_post
    else:
        weak_value = model_weak_value(params, psi, meter)
        p_post = model_postselection(params, psi, meter).p_post

    log.info(f"{psi} at {meter} with {params}: weak value {weak_value!r}, P(A) {p_post!r}")
    print(f"{weak_value:.4g}")
    return ExitCode.OK


def run_fig2_command(config: RunConfig, written: List[str]) -> int:
    csv_path, metadata_path = _output_paths(config, "fig2.csv")
    table = run_fig2(
        config.plan,
        config.psi,
        config.params,
        config.strength_grid,
        workers=config.workers,
        progress=_progress_enabled(),
    )
    table.metadata["command"] = "fig2"
    table.metadata["angle_degrees"] = config.angle

    table.to_csv(csv_path)
    written.append(csv_path)
    table.to_metadata_json(metadata_path)
    written.append(metadata_path)
    return ExitCode.OK


def run_tomo(config: RunConfig, written: List[str]) -> int:
    csv_path, metadata_path = _output_paths(config, "chi.csv")
    meter = MeterSetting.from_strength(config.strength)
    chi = process_tomography(imperfect_channel(meter, config.params), project_psd=config.project_psd)

    with atomic_output(csv_path) as stream:
        chi.write_csv(stream)
    written.append(csv_path)

    metadata = {
        "command": "tomo",
        "seed": config.seed,
        "K": meter.K,
        "model": config.params.to_dict(),
        "project_psd": config.project_psd,
        "trace": chi.trace(),
        "rank": chi.rank(),
        "basis": chi.labels,
        "versions": package_versions(),
    }
    with atomic_output(metadata_path) as stream:
        stream.write(dumps_metadata(metadata))
    written.append(metadata_path)
    return ExitCode.OK


SUBCOMMAND_REGISTRY: Dict[str, Callable[[RunConfig, List[str]], int]] = {
    "gate-verify": run_gate_verify,
    "povm": run_povm,
    "weak-value": run_weak_value,
    "fig2": run_fig2_command,
    "tomo": run_tomo,
}


def _remove_partial_outputs(paths: List[str]):
    for path in paths:
        if os.path.exists(path):
            log.warning(f"Removing partial output {path}")
            os.remove(path)


def execute(config: RunConfig) -> int:
    """Run the configured subcommand, mapping failures to exit codes and removing any files it already wrote."""
    written: List[str] = []
    try:
        return int(SUBCOMMAND_REGISTRY[config.subcommand](config, written))
    except ConfigError as err:
        log.error(limit_log_length(str(err)))
        status = err.exit_code
    except UNDEFINED_QUANTITY_ERRORS as err:
        log.error(limit_log_length(f"Undefined quantity ({err.code}): {err}"))
        status = ExitCode.UNDEFINED_QUANTITY
    except WeakValuesError as err:
        log.error(limit_log_length(f"Library error ({err.code}): {err}"))
        status = ExitCode.LIBRARY_ERROR
    except ValueError as err:
        log.error(limit_log_length(f"Invalid argument: {err}"))
        status = ExitCode.USAGE
    except OSError as err:
        log.error(limit_log_length(f"Could not write output: {err}"))
        status = ExitCode.OUTPUT_ERROR

    _remove_partial_outputs(written)
    return int(status)


def run():
    configure_logging(filepath=None, log_level=parse_log_level(WeakValuesRuntimeConstants.log_level))
    log = logging.getLogger(__name__)

    try:
        config = parse_config(sys.argv[1:])
    except ConfigError as err:
        log.error(limit_log_length(str(err)))
        sys.exit(int(err.exit_code))
    except ValueError as err:
        log.error(limit_log_length(f"Invalid argument: {err}"))
        sys.exit(int(ExitCode.USAGE))

    if config.log_level or config.log_file:
        log_level = parse_log_level(config.log_level or WeakValuesRuntimeConstants.log_level)
        configure_logging(filepath=config.log_file, log_level=log_level)

    log.info(limit_log_length(f"Running {config.subcommand} with {config.to_dict()}"))
    execution_begin = datetime.now()

    status = execute(config)

    elapsed = get_human_readable_elapsed_since(execution_begin)
    log.info(f"{config.subcommand} finished with status {status} in {elapsed}")
    sys.exit(status)
