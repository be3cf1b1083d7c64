import logging
from typing import Dict
from typing import NamedTuple
from typing import Tuple

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.analytic.weakvalues import ideal_output_amplitudes
from photonics.weakvalues.analytic.weakvalues import knowledge_from_probs
from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.device.layout import build_network
from photonics.weakvalues.device.layout import DEVICE_REGISTRY
from photonics.weakvalues.device.layout import METER_MODES
from photonics.weakvalues.device.layout import SIGNAL_MODES
from photonics.weakvalues.device.twoqubitstate import TwoQubitState
from photonics.weakvalues.fockengine.coincidence import project_coincidence
from photonics.weakvalues.fockengine.fockstate import FockState

log = logging.getLogger(__name__)

IDEAL_SUCCESS_PROBABILITY = 1.0 / 9.0


def signal_photon(signal: Polarization) -> Dict[str, complex]:
    return dict(zip(SIGNAL_MODES, (signal.alpha, signal.beta)))


def meter_photon(meter: MeterSetting) -> Dict[str, complex]:
    return dict(zip(METER_MODES, (meter.gamma, meter.gammabar)))


def input_state(signal: Polarization, meter: MeterSetting) -> FockState:
    return FockState.from_creation(DEVICE_REGISTRY, [signal_photon(signal), meter_photon(meter)])


def run_device(signal: Polarization, meter: MeterSetting, cfg: DeviceConfig = DeviceConfig()) -> TwoQubitState:
    if not isinstance(signal, Polarization) or not isinstance(meter, MeterSetting):
        raise TypeError(f"run_device requires a Polarization and a MeterSetting (got {signal!r}, {meter!r})")

    output = build_network(cfg).apply(input_state(signal, meter))
    state, success_prob = project_coincidence(output, SIGNAL_MODES, METER_MODES)

    if state.empty:
        log.warning(f"Device with {cfg} never produces a coincidence for {signal}, {meter}")
    else:
        log.debug(f"Device output for {signal}, {meter}: {state}")
    return state


def ideal_output_state(
    signal: Polarization, meter: MeterSetting, success_prob: float = IDEAL_SUCCESS_PROBABILITY
) -> TwoQubitState:
    return TwoQubitState(ideal_output_amplitudes(signal, meter).reshape(-1), success_prob=success_prob)


class MeterDistribution(NamedTuple):
    p_hh: float
    p_hv: float
    p_vh: float
    p_vv: float


def device_meter_distribution(state: TwoQubitState) -> MeterDistribution:
    if state.empty:
        raise ValueError("Cannot take the coincidence distribution of an empty (never successful) device output")
    return MeterDistribution(*(float(p) for p in state.probabilities()))


def meter_marginals(state: TwoQubitState) -> Tuple[float, float]:
    """(P(meter H), P(meter V)), summed over the signal outcome."""
    distribution = device_meter_distribution(state)
    return distribution.p_hh + distribution.p_vh, distribution.p_hv + distribution.p_vv


def device_knowledge(state: TwoQubitState) -> float:
    distribution = device_meter_distribution(state)
    return knowledge_from_probs(distribution.p_hh, distribution.p_vv, distribution.p_hv, distribution.p_vh)


def concurrence(state: TwoQubitState) -> float:
    """Concurrence 2|a_HH a_VV - a_HV a_VH| of a pure two-qubit state."""
    a_hh, a_hv, a_vh, a_vv = state.amplitudes
    return float(2.0 * np.abs(a_hh * a_vv - a_hv * a_vh))
