from __future__ import annotations

import itertools
import logging
import math
from typing import Dict
from typing import Iterable
from typing import Iterator
from typing import Mapping
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.fockengine.modes import ModeRegistry
from photonics.weakvalues.utils.errors import NormalizationError
from photonics.weakvalues.utils.errors import PhotonCapExceededError

log = logging.getLogger(__name__)

Occupation = Tuple[int, ...]

DEFAULT_PHOTON_CAP = 2
PRUNE_TOLERANCE = 1e-15
NORM_TOLERANCE = 1e-12


class FockState:
    """
    Sparse pure state over the photon-number basis of a ModeRegistry.  Terms map occupation vectors (one count per
    registered mode) to complex amplitudes.  Sub-normalized states are permitted and represent conditioned branches.
    """

    registry: ModeRegistry
    photon_cap: int
    _terms: Dict[Occupation, complex]

    def __init__(
        self,
        registry: ModeRegistry,
        terms: Mapping[Sequence[int], complex],
        photon_cap: int = DEFAULT_PHOTON_CAP,
    ):
        self.registry = registry
        self.photon_cap = photon_cap

        validated: Dict[Occupation, complex] = {}
        for raw_occupation, raw_amplitude in terms.items():
            occupation = tuple(int(n) for n in raw_occupation)
            if len(occupation) != registry.size:
                raise ValueError(
                    f"Occupation vector {occupation} has {len(occupation)} entries for {registry.size} registered modes"
                )
            if any(n < 0 for n in occupation):
                raise ValueError(f"Occupation vector {occupation} contains negative photon counts")
            if sum(occupation) > photon_cap:
                raise PhotonCapExceededError(
                    f"Occupation vector {occupation} holds {sum(occupation)} photons, exceeding cap of {photon_cap}"
                )

            amplitude = complex(raw_amplitude)
            if not (math.isfinite(amplitude.real) and math.isfinite(amplitude.imag)):
                raise ValueError(f"Amplitude for {occupation} is not finite: {amplitude}")
            if abs(amplitude) < PRUNE_TOLERANCE:
                continue

            validated[occupation] = amplitude

        self._terms = validated

        norm_squared = self.norm_squared()
        if norm_squared > 1 + NORM_TOLERANCE:
            raise NormalizationError(f"FockState has squared norm {norm_squared}, exceeding 1")

    @staticmethod
    def vacuum(registry: ModeRegistry, photon_cap: int = DEFAULT_PHOTON_CAP) -> FockState:
        return FockState(registry, {(0,) * registry.size: 1.0}, photon_cap=photon_cap)

    @staticmethod
    def from_occupation(
        registry: ModeRegistry, occupation: Mapping[str, int], photon_cap: int = DEFAULT_PHOTON_CAP
    ) -> FockState:
        """Number state with the given per-mode counts, e.g. {"a": 1, "b": 1} for |1,1>."""
        vector = [0] * registry.size
        for label, count in occupation.items():
            vector[registry.index(label)] = count
        return FockState(registry, {tuple(vector): 1.0}, photon_cap=photon_cap)

    @staticmethod
    def from_creation(
        registry: ModeRegistry,
        photons: Sequence[Mapping[str, complex]],
        photon_cap: int = DEFAULT_PHOTON_CAP,
    ) -> FockState:
        """
        Build the state prod_p (sum_m c[p][m] a_m^dagger) |0>, where each photon p is described by a mapping of mode
        label to single-photon amplitude.  Photons occupying the same mode pick up the bosonic sqrt(n!) factor.
        """
        if len(photons) > photon_cap:
            raise PhotonCapExceededError(f"Cannot create {len(photons)} photons with a cap of {photon_cap}")

        resolved = [[(registry.index(label), complex(amp)) for label, amp in photon.items()] for photon in photons]

        terms: Dict[Occupation, complex] = {}
        for choice in itertools.product(*resolved):
            occupation = [0] * registry.size
            coefficient = 1 + 0j
            for mode_index, amplitude in choice:
                occupation[mode_index] += 1
                coefficient *= amplitude
            key = tuple(occupation)
            bosonic_factor = math.sqrt(math.prod(math.factorial(n) for n in key))
            terms[key] = terms.get(key, 0j) + coefficient * bosonic_factor

        return FockState(registry, terms, photon_cap=photon_cap)

    @staticmethod
    def single_photon(
        registry: ModeRegistry, amplitudes: Mapping[str, complex], photon_cap: int = DEFAULT_PHOTON_CAP
    ) -> FockState:
        return FockState.from_creation(registry, [amplitudes], photon_cap=photon_cap)

    def items(self) -> Iterator[Tuple[Occupation, complex]]:
        return iter(self._terms.items())

    @property
    def terms(self) -> Dict[Occupation, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return self._terms.get(tuple(occupation), 0j)

    def amplitude_of(self, occupation: Mapping[str, int]) -> complex:
        vector = [0] * self.registry.size
        for label, count in occupation.items():
            vector[self.registry.index(label)] = count
        return self.amplitude(vector)

    def probability_of(self, occupation: Mapping[str, int]) -> float:
        return abs(self.amplitude_of(occupation)) ** 2

    def norm_squared(self) -> float:
        return float(sum(abs(amp) ** 2 for amp in self._terms.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_empty(self) -> bool:
        return len(self._terms) == 0

    def photon_numbers(self) -> Iterable[int]:
        return {sum(occupation) for occupation in self._terms}

    def inner(self, other: FockState) -> complex:
        """<self|other>"""
        if self.registry != other.registry:
            raise ValueError("Cannot take inner product of states over different mode registries")
        return sum((self._terms[occ].conjugate() * amp for occ, amp in other.items() if occ in self._terms), 0j)

    def normalized(self) -> FockState:
        norm = self.norm()
        if norm == 0.0:
            raise NormalizationError("Cannot normalize a zero-norm FockState")
        return FockState(self.registry, {occ: amp / norm for occ, amp in self._terms.items()}, self.photon_cap)

    def to_vector(self, basis: Sequence[Occupation]) -> np.ndarray:
        return np.array([self.amplitude(occ) for occ in basis], dtype=complex)

    def __repr__(self):
        rendered = " + ".join(f"({amp:.6g})|{','.join(map(str, occ))}>" for occ, amp in sorted(self._terms.items()))
        return f"FockState[{list(self.registry.labels)}]({rendered or '0'})"


def number_expectation(state: FockState, mode: str) -> float:
    """
    <n_mode> evaluated on the renormalized state.  For a single photon spread across dual-rail modes this is the
    probability of finding the photon in the given mode.
    """
    index = state.registry.index(mode)
    norm_squared = state.norm_squared()
    if norm_squared == 0.0:
        raise NormalizationError(f'Cannot take the photon-number expectation of mode "{mode}" on a zero-norm state')

    weighted = sum(occupation[index] * abs(amplitude) ** 2 for occupation, amplitude in state.items())
    return float(weighted / norm_squared)
