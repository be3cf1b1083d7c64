from __future__ import annotations

import math
from dataclasses import dataclass
from dataclasses import fields

from photonics.weakvalues.utils.errors import InvalidTransmissivityError


@dataclass(frozen=True)
class DeviceConfig:
    interfering_eta: float = 1.0 / 3.0
    balance_eta: float = 1.0 / 3.0
    hadamard_eta: float = 0.5

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if math.isnan(value) or not 0.0 <= value <= 1.0:
                raise InvalidTransmissivityError(f"DeviceConfig.{f.name} must lie in [0, 1] (got {value})")
