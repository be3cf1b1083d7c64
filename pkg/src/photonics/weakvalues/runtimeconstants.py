import os
from abc import ABC

from photonics.weakvalues.utils.misc import parse_boolean_env_var
from photonics.weakvalues.utils.misc import parse_int_env_var


class WeakValuesRuntimeConstants(ABC):
    # artifacts without an explicit --output path are written here
    output_dir: str = os.environ.get("WEAKVALUES_OUTPUT_DIR", ".")

    # threads used to simulate strength-grid points
    workers: int = parse_int_env_var("WEAKVALUES_WORKERS", default=1)

    # Expects a value like "true" or "1"
    disable_progress: bool = parse_boolean_env_var("WEAKVALUES_DISABLE_PROGRESS")

    log_level: str = os.environ.get("LOGLEVEL", "INFO")
