"""CSV and JSON artifact writing shared by the result tables."""
import contextlib
import json
import logging
import os
import tempfile
from typing import Any
from typing import Dict
from typing import Iterator
from typing import Optional
from typing import TextIO

import numpy as np
import scipy
from photonics.weakvalues import __version__
from photonics.weakvalues.utils.misc import format_real

log = logging.getLogger(__name__)

DISTRIBUTION_NAME = "photonics.weak-values"


def format_optional(value: Optional[float]) -> str:
    return "" if value is None else format_real(value)


def package_versions() -> Dict[str, str]:
    return {DISTRIBUTION_NAME: __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def dumps_metadata(metadata: Dict[str, Any]) -> str:
    """Deterministic JSON rendering: sorted keys, no timestamps."""
    return json.dumps(metadata, sort_keys=True, indent=2) + "\n"


@contextlib.contextmanager
def atomic_output(path: str) -> Iterator[TextIO]:
    """
    Open a text stream whose content replaces the file at path only if the block completes.  On failure the partial
    temporary file is removed and any existing file at path is left untouched.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temp_path = tempfile.mkstemp(prefix=".partial-", suffix=os.path.basename(path), dir=directory)
    try:
        with os.fdopen(handle, "w", newline="") as stream:
            yield stream
        os.replace(temp_path, path)
        log.info(f"Wrote {path}")
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
