from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict
from typing import Union

from photonics.weakvalues.fockengine.distinguishable import Labelling
from photonics.weakvalues.utils.errors import ParameterRangeError


@dataclass(frozen=True)
class ImperfectionParams:
    """
    visibility is the weight of the coherent (indistinguishable) branch, depol the weight of white noise applied after
    the device, and labelling selects how the mismatched branch carries its hidden labels.
    """

    visibility: float = 1.0
    depol: float = 0.0
    labelling: Union[Labelling, str] = Labelling.PATH

    def __post_init__(self):
        for name in ("visibility", "depol"):
            value = float(getattr(self, name))
            if math.isnan(value) or not 0.0 <= value <= 1.0:
                raise ParameterRangeError(f"ImperfectionParams.{name} must lie in [0, 1] (got {value})")
            object.__setattr__(self, name, value)

        if not isinstance(self.labelling, Labelling):
            try:
                object.__setattr__(self, "labelling", Labelling(str(self.labelling).lower()))
            except ValueError:
                raise ParameterRangeError(
                    f'Unknown labelling "{self.labelling}" (expected one of {[m.value for m in Labelling]})'
                )

    @property
    def is_ideal(self) -> bool:
        return self.visibility == 1.0 and self.depol == 0.0

    def to_dict(self) -> Dict[str, Union[float, str]]:
        return {"visibility": self.visibility, "depol": self.depol, "labelling": self.labelling.value}
