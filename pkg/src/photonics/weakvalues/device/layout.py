"""
Mode layout of the measurement device.  The meter is rotated by a 50:50 splitter so that its diagonal components sit in
mH ("+") and mV ("-"); the "-" component meets the signal's V mode at the 1/3 splitter, where the two-photon amplitude
picks up a sign flip; the noninteracting sH and "+" modes lose 2/3 of their amplitude-squared to ancillas; a second
50:50 splitter undoes the rotation.  Conditioned on one photon in each of the signal and meter mode pairs this
implements a controlled bit flip of the meter, controlled by signal V, with success probability 1/9.
"""
import functools
import logging

from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.fockengine.beamsplitter import BeamSplitterSpec
from photonics.weakvalues.fockengine.modes import ModeRegistry
from photonics.weakvalues.fockengine.network import Network
from photonics.weakvalues.utils.misc import limit_log_length

log = logging.getLogger(__name__)

SIGNAL_MODES = ("sH", "sV")
METER_MODES = ("mH", "mV")
LOSS_MODES = ("loss_s", "loss_m")

PREPARATION_STAGE = "prepare"
INTERACTION_STAGE = "interact"
RECOMBINATION_STAGE = "recombine"

DEVICE_REGISTRY = ModeRegistry(SIGNAL_MODES + METER_MODES + LOSS_MODES)


@functools.lru_cache(maxsize=64)
def build_network(cfg: DeviceConfig) -> Network:
    s_h, s_v = SIGNAL_MODES
    m_plus, m_minus = METER_MODES
    loss_s, loss_m = LOSS_MODES

    rotation = BeamSplitterSpec(m_plus, m_minus, cfg.hadamard_eta)
    network = Network(
        DEVICE_REGISTRY,
        [
            (PREPARATION_STAGE, [rotation]),
            (
                INTERACTION_STAGE,
                [
                    BeamSplitterSpec(s_v, m_minus, cfg.interfering_eta),
                    BeamSplitterSpec(s_h, loss_s, cfg.balance_eta),
                    BeamSplitterSpec(m_plus, loss_m, cfg.balance_eta),
                ],
            ),
            (RECOMBINATION_STAGE, [rotation.inverse()]),
        ],
    )
    log.debug(limit_log_length(f"Built device network {network}"))
    return network
