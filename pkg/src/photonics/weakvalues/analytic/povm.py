from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.utils.errors import IndeterminateStrengthError
from photonics.weakvalues.utils.linalg import I2
from photonics.weakvalues.utils.linalg import is_psd
from photonics.weakvalues.utils.linalg import SIGMA_Z

COMPLETENESS_TOLERANCE = 1e-12

# Stokes S1 = |H><H| - |V><V|
S1 = SIGMA_Z


@dataclass(frozen=True, eq=False)
class Povm:
    pi_H: np.ndarray
    pi_V: np.ndarray

    def __post_init__(self):
        for name in ("pi_H", "pi_V"):
            element = np.asarray(getattr(self, name), dtype=complex)
            if element.shape != (2, 2):
                raise ValueError(f"POVM element {name} must be 2x2 (got shape {element.shape})")
            if not is_psd(element, atol=COMPLETENESS_TOLERANCE):
                raise ValueError(f"POVM element {name} is not positive semidefinite: {element}")
            object.__setattr__(self, name, element)

        if not np.allclose(self.pi_H + self.pi_V, I2, atol=COMPLETENESS_TOLERANCE, rtol=0):
            raise ValueError("POVM elements do not sum to the identity")

    def probabilities(self, psi: Polarization) -> Tuple[float, float]:
        """(P(meter H), P(meter V)) for signal psi."""
        vector = psi.vector
        return (
            float(np.vdot(vector, self.pi_H @ vector).real),
            float(np.vdot(vector, self.pi_V @ vector).real),
        )


def povm_elements(meter: MeterSetting) -> Povm:
    return Povm(pi_H=0.5 * (I2 + meter.K * S1), pi_V=0.5 * (I2 - meter.K * S1))


def expectation_s1(psi: Polarization) -> float:
    return abs(psi.alpha) ** 2 - abs(psi.beta) ** 2


def expectation_s1_from_povm(psi: Polarization, meter: MeterSetting) -> float:
    """<S1> recovered from meter statistics as (P(H) - P(V)) / K."""
    if meter.is_zero_strength:
        raise IndeterminateStrengthError("<S1> cannot be recovered from meter statistics at zero measurement strength")
    p_h, p_v = povm_elements(meter).probabilities(psi)
    return (p_h - p_v) / meter.K
