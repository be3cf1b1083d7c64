from __future__ import annotations

import math
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import replace
from typing import Dict
from typing import Union

from photonics.weakvalues.utils.errors import ParameterRangeError


@dataclass(frozen=True)
class RunPlan:
    """Counting rates (s^-1) and durations (s) of the calibration and weak-value runs."""

    unpostselected_rate: float = 44.6
    postselected_rate: float = 0.52
    duration_K: float = 100.0
    duration_wv: float = 1000.0
    seed: int = 0
    # recorded in metadata only; accidental coincidences are not modelled
    coincidence_window_ns: float = 1.0

    def __post_init__(self):
        for name in ("unpostselected_rate", "postselected_rate", "duration_K", "duration_wv", "coincidence_window_ns"):
            value = float(getattr(self, name))
            if math.isnan(value) or math.isinf(value) or value < 0:
                raise ParameterRangeError(f"RunPlan.{name} must be a finite non-negative number (got {value})")
            object.__setattr__(self, name, value)

        if int(self.seed) != self.seed or self.seed < 0:
            raise ParameterRangeError(f"RunPlan.seed must be a non-negative integer (got {self.seed})")
        object.__setattr__(self, "seed", int(self.seed))

    def scaled(self, duration_factor: float) -> RunPlan:
        return replace(
            self, duration_K=self.duration_K * duration_factor, duration_wv=self.duration_wv * duration_factor
        )

    def with_seed(self, seed: int) -> RunPlan:
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Union[float, int]]:
        return asdict(self)
