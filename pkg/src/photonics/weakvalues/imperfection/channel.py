from __future__ import annotations

import functools
import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict
from typing import Hashable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.device.layout import build_network
from photonics.weakvalues.device.layout import DEVICE_REGISTRY
from photonics.weakvalues.device.layout import INTERACTION_STAGE
from photonics.weakvalues.device.layout import METER_MODES
from photonics.weakvalues.device.layout import SIGNAL_MODES
from photonics.weakvalues.fockengine.coincidence import coincidence_amplitudes
from photonics.weakvalues.fockengine.distinguishable import labelled_coincidence_branches
from photonics.weakvalues.fockengine.distinguishable import Labelling
from photonics.weakvalues.fockengine.distinguishable import mode_vector
from photonics.weakvalues.fockengine.fockstate import FockState
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.utils.linalg import is_psd
from photonics.weakvalues.utils.linalg import two_qubit_pauli_basis

log = logging.getLogger(__name__)

KRAUS_PRUNE_TOLERANCE = 1e-15
TRACE_TOLERANCE = 1e-12


class TwoQubitChannel:
    """
    Completely positive, trace-nonincreasing map on signal ⊗ meter operators in operator-sum form.  The trace of an
    output is the probability that the device heralded success.  When a meter setting is attached, the channel can be
    fed a signal polarization directly.
    """

    kraus: Tuple[np.ndarray, ...]
    meter: Optional[MeterSetting]

    def __init__(self, kraus: Sequence[np.ndarray], meter: Optional[MeterSetting] = None):
        operators = []
        for op in kraus:
            op = np.asarray(op, dtype=complex)
            if op.shape != (4, 4):
                raise ValueError(f"Two-qubit Kraus operators must be 4x4 (got shape {op.shape})")
            if np.max(np.abs(op)) >= KRAUS_PRUNE_TOLERANCE:
                operators.append(op)

        self.kraus = tuple(operators)
        self.meter = meter

        if not self.is_trace_nonincreasing():
            raise ValueError(
                f"Kraus operators increase trace (largest eigenvalue of sum K^dagger K is {self.max_transmission()})"
            )

    @staticmethod
    def identity() -> TwoQubitChannel:
        return TwoQubitChannel([np.eye(4, dtype=complex)])

    def with_meter(self, meter: MeterSetting) -> TwoQubitChannel:
        return TwoQubitChannel(self.kraus, meter)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum((k @ rho @ k.conj().T for k in self.kraus), np.zeros((4, 4), dtype=complex))

    def success_probability(self, rho: np.ndarray) -> float:
        return float(np.trace(self.apply(rho)).real)

    def prepare_input(self, signal: Polarization) -> np.ndarray:
        if self.meter is None:
            raise ValueError("Channel has no attached meter setting; apply it to a two-qubit operator instead")
        return np.kron(signal.density(), np.outer(self.meter.vector, self.meter.vector.conj()))

    def apply_to_signal(self, signal: Polarization) -> np.ndarray:
        """Unnormalized heralded output for the given signal and the attached meter."""
        return self.apply(self.prepare_input(signal))

    def transmission_operator(self) -> np.ndarray:
        """sum K^dagger K; its expectation in an input state is the success probability."""
        return sum((k.conj().T @ k for k in self.kraus), np.zeros((4, 4), dtype=complex))

    def max_transmission(self) -> float:
        return float(np.linalg.eigvalsh(self.transmission_operator()).max()) if self.kraus else 0.0

    def is_trace_nonincreasing(self, atol: float = TRACE_TOLERANCE) -> bool:
        return self.max_transmission() <= 1.0 + atol

    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix sum vec(K) vec(K)^dagger, with row-major vectorization."""
        vectors = [k.reshape(-1) for k in self.kraus]
        return sum((np.outer(v, v.conj()) for v in vectors), np.zeros((16, 16), dtype=complex))

    def is_completely_positive(self, atol: float = 1e-10) -> bool:
        return is_psd(self.choi(), atol=atol)

    def mixed_with(self, other: TwoQubitChannel, weight: float) -> TwoQubitChannel:
        """weight * self + (1 - weight) * other"""
        kraus = [np.sqrt(weight) * k for k in self.kraus] + [np.sqrt(1.0 - weight) * k for k in other.kraus]
        return TwoQubitChannel(kraus, self.meter or other.meter)

    def depolarized(self, p: float) -> TwoQubitChannel:
        """Follow the channel with two-qubit white noise of weight p, which preserves the heralding probability."""
        if p == 0.0:
            return self
        paulis = two_qubit_pauli_basis()
        kraus = [np.sqrt(1.0 - p) * k for k in self.kraus]
        kraus += [np.sqrt(p / len(paulis)) * pauli @ k for k, pauli in itertools.product(self.kraus, paulis)]
        return TwoQubitChannel(kraus, self.meter)

    def __repr__(self):
        return f"TwoQubitChannel({len(self.kraus)} Kraus operators, meter={self.meter})"


def _basis_inputs() -> List[Tuple[int, str, str]]:
    """(column index, signal mode, meter mode) for each computational basis input, column = 2 * signal + meter."""
    return [
        (2 * s + m, signal_mode, meter_mode)
        for (s, signal_mode), (m, meter_mode) in itertools.product(enumerate(SIGNAL_MODES), enumerate(METER_MODES))
    ]


@functools.lru_cache(maxsize=32)
def ideal_kraus(cfg: DeviceConfig = DeviceConfig()) -> np.ndarray:
    """Heralded operator of the indistinguishable device, one column per basis input, from Fock propagation."""
    network = build_network(cfg)
    operator = np.zeros((4, 4), dtype=complex)
    for column, signal_mode, meter_mode in _basis_inputs():
        state = FockState.from_creation(DEVICE_REGISTRY, [{signal_mode: 1.0}, {meter_mode: 1.0}])
        operator[:, column] = coincidence_amplitudes(network.apply(state), SIGNAL_MODES, METER_MODES).reshape(-1)
    operator.setflags(write=False)
    return operator


@functools.lru_cache(maxsize=32)
def mismatched_kraus(
    cfg: DeviceConfig = DeviceConfig(), labelling: Labelling = Labelling.PATH
) -> Tuple[np.ndarray, ...]:
    """One Kraus operator per incoherent label assignment of the distinguishable-photon device."""
    network = build_network(cfg)
    operators: Dict[Tuple[Hashable, Hashable], np.ndarray] = defaultdict(lambda: np.zeros((4, 4), dtype=complex))

    for column, signal_mode, meter_mode in _basis_inputs():
        inputs = [mode_vector(DEVICE_REGISTRY, {signal_mode: 1.0}), mode_vector(DEVICE_REGISTRY, {meter_mode: 1.0})]
        branches = labelled_coincidence_branches(
            network, inputs, SIGNAL_MODES, METER_MODES, labelling=labelling, path_stage=INTERACTION_STAGE
        )
        for branch in branches:
            operators[(branch.signal_label, branch.meter_label)][:, column] += branch.amplitudes.reshape(-1)

    log.debug(f"Mismatched device with {labelling.value} labelling has {len(operators)} label assignments")
    result = tuple(operators[key] for key in sorted(operators, key=repr))
    for op in result:
        op.setflags(write=False)
    return result


def ideal_channel(meter: Optional[MeterSetting] = None, cfg: DeviceConfig = DeviceConfig()) -> TwoQubitChannel:
    return TwoQubitChannel([ideal_kraus(cfg)], meter)


def mismatched_channel(
    meter: Optional[MeterSetting] = None,
    cfg: DeviceConfig = DeviceConfig(),
    labelling: Labelling = Labelling.PATH,
) -> TwoQubitChannel:
    return TwoQubitChannel(mismatched_kraus(cfg, labelling), meter)


def imperfect_channel(
    meter: Optional[MeterSetting], params: ImperfectionParams, cfg: DeviceConfig = DeviceConfig()
) -> TwoQubitChannel:
    """visibility-weighted mixture of the coherent and mismatched devices, followed by optional white noise."""
    kraus: List[np.ndarray] = []
    if params.visibility > 0.0:
        kraus.append(np.sqrt(params.visibility) * ideal_kraus(cfg))
    if params.visibility < 1.0:
        kraus.extend(np.sqrt(1.0 - params.visibility) * k for k in mismatched_kraus(cfg, params.labelling))

    return TwoQubitChannel(kraus, meter).depolarized(params.depol)


@dataclass(frozen=True, eq=False)
class DistinguishableOutput:
    density: np.ndarray
    success_prob: float

    @property
    def joint_distribution(self) -> np.ndarray:
        """Probabilities of (HH, HV, VH, VV) for signal ⊗ meter."""
        return np.real(np.diag(self.density)).copy()

    def coherence(self, row: int, column: int) -> complex:
        return complex(self.density[row, column])


def distinguishable_device(
    signal: Polarization,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    labelling: Labelling = Labelling.PHOTON,
) -> DistinguishableOutput:
    """Heralded output of the device when the two photons never interfere."""
    output = mismatched_channel(meter, cfg, labelling).apply_to_signal(signal)
    success_prob = float(np.trace(output).real)
    if success_prob == 0.0:
        return DistinguishableOutput(np.zeros((4, 4), dtype=complex), 0.0)
    return DistinguishableOutput(output / success_prob, success_prob)
