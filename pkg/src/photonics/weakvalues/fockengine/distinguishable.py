"""
Propagation of photons carrying hidden labels.  Amplitudes interfere only within a label; probabilities add across
labels.  With PHOTON labelling each photon carries its own label through the whole network; with PATH labelling the
label also records which mode the photon occupied on entering a named stage, so the split components of each photon
stop interfering with one another after that point.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Hashable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.fockengine.beamsplitter import BeamSplitterSpec
from photonics.weakvalues.fockengine.fockstate import PRUNE_TOLERANCE
from photonics.weakvalues.fockengine.modes import ModeRegistry
from photonics.weakvalues.fockengine.network import Network

log = logging.getLogger(__name__)


class Labelling(Enum):
    PHOTON = "photon"
    PATH = "path"


@dataclass(frozen=True, eq=False)
class LabelledBranch:
    """Coincidence amplitudes [signal, meter] of one incoherent label assignment."""

    signal_label: Hashable
    meter_label: Hashable
    amplitudes: np.ndarray

    @property
    def probability(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def mode_vector(registry: ModeRegistry, amplitudes: Mapping[str, complex]) -> np.ndarray:
    vector = np.zeros(registry.size, dtype=complex)
    for label, amplitude in amplitudes.items():
        vector[registry.index(label)] += amplitude
    return vector


def labelled_components(
    network: Network,
    photon_index: int,
    input_vector: np.ndarray,
    labelling: Labelling,
    path_stage: Optional[str] = None,
) -> List[Tuple[Hashable, np.ndarray]]:
    """Output single-photon amplitude vectors of one photon, one per hidden label it may carry."""
    if labelling is Labelling.PHOTON:
        return [((photon_index,), network.transfer_matrix() @ input_vector)]

    if path_stage is None:
        raise ValueError("PATH labelling requires the name of the stage at which path labels are assigned")

    early, late = network.split_transfer(path_stage)
    intermediate = early @ input_vector
    return [
        ((photon_index, network.registry.labels[k]), late[:, k] * intermediate[k])
        for k in range(network.registry.size)
        if abs(intermediate[k]) >= PRUNE_TOLERANCE
    ]


def labelled_coincidence_branches(
    network: Network,
    inputs: Sequence[np.ndarray],
    signal_modes: Sequence[str],
    meter_modes: Sequence[str],
    labelling: Labelling = Labelling.PHOTON,
    path_stage: Optional[str] = None,
) -> List[LabelledBranch]:
    """
    Coincidence branches of two labelled photons with the given input mode vectors.  Each pair of labels contributes
    two incoherent branches: first photon at the signal detector with the second at the meter detector, and the swap.
    """
    if len(inputs) != 2:
        raise ValueError(f"Labelled coincidence propagation is defined for exactly two photons (got {len(inputs)})")

    signal_indices = list(network.registry.indices(signal_modes))
    meter_indices = list(network.registry.indices(meter_modes))

    first, second = (
        labelled_components(network, photon_index, vector, labelling, path_stage)
        for photon_index, vector in enumerate(inputs)
    )

    branches: List[LabelledBranch] = []
    for first_label, first_output in first:
        for second_label, second_output in second:
            for signal_label, signal_output, meter_label, meter_output in (
                (first_label, first_output, second_label, second_output),
                (second_label, second_output, first_label, first_output),
            ):
                amplitudes = np.outer(signal_output[signal_indices], meter_output[meter_indices])
                if np.max(np.abs(amplitudes)) < PRUNE_TOLERANCE:
                    continue
                branches.append(LabelledBranch(signal_label, meter_label, amplitudes))

    return branches


def distinguishable_coincidence_probability(bs: BeamSplitterSpec) -> float:
    """Probability of one photon at each output when fully distinguishable photons enter both ports of a splitter."""
    registry = ModeRegistry([bs.mode_a, bs.mode_b])
    network = Network(registry, [("splitter", [bs])])
    inputs = [mode_vector(registry, {bs.mode_a: 1.0}), mode_vector(registry, {bs.mode_b: 1.0})]
    branches = labelled_coincidence_branches(network, inputs, [bs.mode_a], [bs.mode_b])
    return float(sum(branch.probability for branch in branches))
