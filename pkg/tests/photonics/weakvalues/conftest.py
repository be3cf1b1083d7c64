import logging

import numpy as np
import pytest

logging.basicConfig(level=logging.DEBUG, format="%(asctime)s::%(name)s::%(levelname)s::%(message)s")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)
