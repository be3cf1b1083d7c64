from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from photonics.weakvalues.fockengine.fockstate import FockState
from photonics.weakvalues.fockengine.fockstate import Occupation
from photonics.weakvalues.utils.errors import InvalidTransmissivityError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BeamSplitterSpec:
    """
    Two-mode beam splitter with transmissivity eta.  Creation operators transform as
        a† -> sqrt(eta) a† - sqrt(1-eta) b†
        b† -> sqrt(1-eta) a† + sqrt(eta) b†
    """

    mode_a: str
    mode_b: str
    eta: float

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0) or math.isnan(self.eta):
            raise InvalidTransmissivityError(
                f"Beam splitter transmissivity must lie in [0, 1] (got {self.eta} across {self.mode_a}/{self.mode_b})"
            )
        if self.mode_a == self.mode_b:
            raise ValueError(f'Beam splitter must act on two distinct modes (got "{self.mode_a}" twice)')

    @property
    def t(self) -> float:
        return math.sqrt(self.eta)

    @property
    def r(self) -> float:
        return math.sqrt(1.0 - self.eta)

    def matrix(self) -> np.ndarray:
        """Single-photon transfer matrix U over (a, b), such that mode j maps to sum_i U[i, j] * mode i."""
        return np.array([[self.t, self.r], [-self.r, self.t]], dtype=complex)

    def inverse(self) -> BeamSplitterSpec:
        return BeamSplitterSpec(mode_a=self.mode_b, mode_b=self.mode_a, eta=self.eta)


def apply_beam_splitter(state: FockState, bs: BeamSplitterSpec) -> FockState:
    ia = state.registry.index(bs.mode_a)
    ib = state.registry.index(bs.mode_b)
    t, r = bs.t, bs.r

    output: Dict[Occupation, complex] = {}
    for occupation, amplitude in state.items():
        na, nb = occupation[ia], occupation[ib]
        norm_in = math.sqrt(math.factorial(na) * math.factorial(nb))

        # expand (t a† - r b†)^na (r a† + t b†)^nb, collecting powers of a†
        for k in range(na + 1):
            coefficient_a = math.comb(na, k) * t**k * (-r) ** (na - k)
            if coefficient_a == 0.0:
                continue
            for l in range(nb + 1):
                coefficient_b = math.comb(nb, l) * r**l * t ** (nb - l)
                if coefficient_b == 0.0:
                    continue

                out_a = k + l
                out_b = na + nb - out_a
                norm_out = math.sqrt(math.factorial(out_a) * math.factorial(out_b))

                new_occupation = list(occupation)
                new_occupation[ia] = out_a
                new_occupation[ib] = out_b
                key = tuple(new_occupation)
                output[key] = output.get(key, 0j) + amplitude * coefficient_a * coefficient_b * norm_out / norm_in

    return FockState(state.registry, output, photon_cap=state.photon_cap)
