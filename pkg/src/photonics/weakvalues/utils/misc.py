import logging
import os
from datetime import datetime

import numpy as np

log = logging.getLogger(__name__)


def get_human_readable_elapsed_since(begin: datetime) -> str:
    elapsed_seconds = (datetime.now() - begin).total_seconds()
    h = int(elapsed_seconds / 3600)
    m = int(elapsed_seconds % 3600 / 60)
    s = elapsed_seconds % 60
    return (f"{h}h" if h else "") + (f"{m}m" if m else "") + f"{s:.1f}s"


def parse_boolean_env_var(key: str, default: bool = False) -> bool:
    raw_value = os.environ.get(key)
    if raw_value is None:
        return default

    valid_truthy_values = ["true", "True", "TRUE", "1"]
    valid_falsy_values = ["false", "False", "FALSE", "0", ""]
    if raw_value in valid_falsy_values:
        return False
    elif raw_value in valid_truthy_values:
        return True
    else:
        raise ValueError(
            f'Could not parse valid boolean from env var "{key}" - expected {valid_truthy_values} for True or {valid_falsy_values} for False'
        )


def parse_int_env_var(key: str, default: int, minimum: int = 1) -> int:
    raw_value = os.environ.get(key)
    if raw_value is None or raw_value.strip() == "":
        return default

    try:
        value = int(raw_value)
    except ValueError:
        log.warning(f'Could not parse integer from env var "{key}" (got "{raw_value}") - using default {default}')
        return default

    if value < minimum:
        log.warning(f'Env var "{key}" must be at least {minimum} (got {value}) - using default {default}')
        return default
    return value


def limit_log_length(log_msg: str, max_str_length: int = 5012) -> str:
    log_msg = str(log_msg)

    if len(log_msg) > max_str_length:
        return log_msg[:max_str_length] + " ... <TRUNCATED>"
    else:
        return log_msg


def format_real(value: float) -> str:
    """Format a double with 17 significant digits, which round-trips exactly."""
    return f"{float(value):.17g}"


def array_summary(arr: np.ndarray, precision: int = 6) -> str:
    """Compact single-line rendering of a small array, for log messages."""
    return np.array2string(np.asarray(arr), precision=precision, suppress_small=True, max_line_width=10_000).replace(
        "\n", ""
    )
