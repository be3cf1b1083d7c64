import logging
from typing import Dict
from typing import Tuple

import numpy as np
from photonics.weakvalues.device.twoqubitstate import TwoQubitState
from photonics.weakvalues.fockengine.fockstate import FockState
from photonics.weakvalues.utils.errors import NormalizationError
from photonics.weakvalues.utils.errors import PhotonNumberError

log = logging.getLogger(__name__)

ModePair = Tuple[str, str]


def _validate_two_photon(state: FockState):
    photon_numbers = state.photon_numbers()
    if photon_numbers and photon_numbers != {2}:
        raise PhotonNumberError(
            f"Coincidence projection requires exactly two photons in every term (got photon numbers {photon_numbers})"
        )


def coincidence_amplitudes(state: FockState, signal_modes: ModePair, meter_modes: ModePair) -> np.ndarray:
    """
    Unnormalized amplitudes of the terms holding exactly one photon in the signal modes and one in the meter modes,
    arranged as [signal, meter].  All other modes, including loss ancillas, are empty in every kept term.
    """
    _validate_two_photon(state)

    signal_indices = state.registry.indices(signal_modes)
    meter_indices = state.registry.indices(meter_modes)

    amplitudes = np.zeros((len(signal_indices), len(meter_indices)), dtype=complex)
    for s, signal_index in enumerate(signal_indices):
        for m, meter_index in enumerate(meter_indices):
            occupation = [0] * state.registry.size
            occupation[signal_index] += 1
            occupation[meter_index] += 1
            amplitudes[s, m] = state.amplitude(occupation)
    return amplitudes


def project_coincidence(
    state: FockState, signal_modes: ModePair, meter_modes: ModePair
) -> Tuple[TwoQubitState, float]:
    kept = coincidence_amplitudes(state, signal_modes, meter_modes)
    projected = TwoQubitState.from_unnormalized(kept.reshape(-1))

    if projected.empty:
        log.debug("Coincidence projection retained no amplitude; returning flagged empty state")

    return projected, projected.success_prob


def coincidence_pattern_probabilities(
    state: FockState, signal_modes: ModePair, meter_modes: ModePair
) -> Dict[str, float]:
    """
    Probabilities of the four coincidence patterns, keyed by the concatenated signal/meter polarization labels
    ("HH", "HV", "VH", "VV"), plus the "rejected" complement on the renormalized input.
    """
    norm_squared = state.norm_squared()
    if norm_squared == 0.0:
        raise NormalizationError("Cannot compute coincidence probabilities of a zero-norm state")

    kept = np.abs(coincidence_amplitudes(state, signal_modes, meter_modes)) ** 2 / norm_squared
    patterns = {f"{s}{m}": float(kept[i, j]) for i, s in enumerate("HV") for j, m in enumerate("HV")}
    patterns["rejected"] = 1.0 - float(kept.sum())
    return patterns
