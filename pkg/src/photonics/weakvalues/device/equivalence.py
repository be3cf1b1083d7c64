"""Comparison of device outputs against the ideal conditioned state, up to global and per-qubit phases."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.device.main import IDEAL_SUCCESS_PROBABILITY
from photonics.weakvalues.device.main import ideal_output_state
from photonics.weakvalues.device.main import run_device
from photonics.weakvalues.device.twoqubitstate import TwoQubitState
from photonics.weakvalues.utils.linalg import random_ket
from photonics.weakvalues.utils.linalg import state_fidelity
from scipy.optimize import minimize
from tqdm import tqdm

log = logging.getLogger(__name__)

DEFAULT_GAMMAS: Tuple[float, ...] = (np.sqrt(0.5), 0.75, 0.8, 0.9, 1.0)
DEFAULT_TOLERANCE = 1e-10

_SIGNAL_BITS = np.array([0, 0, 1, 1])
_METER_BITS = np.array([0, 1, 0, 1])
_PHASE_GRID = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)


def _phased_overlaps(candidate: np.ndarray, target: np.ndarray, phi_s: np.ndarray, phi_m: np.ndarray) -> np.ndarray:
    """|<target| Z(phi_s) ⊗ Z(phi_m) |candidate>|^2 over broadcast phase arrays."""
    weights = target.conj() * candidate
    phases = np.exp(1j * (np.multiply.outer(phi_s, _SIGNAL_BITS) + np.multiply.outer(phi_m, _METER_BITS)))
    return np.abs(phases @ weights) ** 2


def phase_quotient_fidelity(candidate: Sequence[complex], target: Sequence[complex]) -> float:
    """Fidelity of two normalized two-qubit kets, maximized over a global phase and one local phase per qubit."""
    candidate = np.asarray(candidate, dtype=complex).reshape(-1)
    target = np.asarray(target, dtype=complex).reshape(-1)

    direct = state_fidelity(target, candidate)
    if direct >= 1.0 - 1e-14:
        return direct

    grid_s, grid_m = np.meshgrid(_PHASE_GRID, _PHASE_GRID, indexing="ij")
    grid = _phased_overlaps(candidate, target, grid_s.ravel(), grid_m.ravel())
    best = int(np.argmax(grid))
    start = np.array([grid_s.ravel()[best], grid_m.ravel()[best]])

    result = minimize(
        lambda phis: -float(_phased_overlaps(candidate, target, np.array([phis[0]]), np.array([phis[1]]))[0]),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 2000},
    )
    return max(direct, float(grid[best]), float(-result.fun))


def gate_infidelity(
    signal: Polarization, meter: MeterSetting, cfg: DeviceConfig = DeviceConfig()
) -> Tuple[float, float]:
    """(1 - phase-quotient fidelity against the ideal state, success probability) of one device run."""
    produced: TwoQubitState = run_device(signal, meter, cfg)
    if produced.empty:
        return 1.0, 0.0
    expected = ideal_output_state(signal, meter)
    return 1.0 - phase_quotient_fidelity(produced.amplitudes, expected.amplitudes), produced.success_prob


@dataclass(frozen=True)
class GateVerificationReport:
    gammas: Tuple[float, ...]
    n_states: int
    max_infidelity: float
    max_success_deviation: float
    success_spread: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_infidelity <= self.tolerance and self.max_success_deviation <= self.tolerance


def verify_gate(
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    n_states: int = 20,
    seed: int = 0,
    cfg: DeviceConfig = DeviceConfig(),
    tolerance: float = DEFAULT_TOLERANCE,
    progress: bool = False,
) -> GateVerificationReport:
    rng = np.random.default_rng(seed)
    signals = [Polarization.from_vector(random_ket(rng), normalize=True) for _ in range(n_states)]

    infidelities = []
    success_probs = []
    for gamma in tqdm(gammas, desc="gate verification", disable=not progress):
        meter = MeterSetting(gamma)
        for signal in signals:
            infidelity, success_prob = gate_infidelity(signal, meter, cfg)
            infidelities.append(infidelity)
            success_probs.append(success_prob)

    report = GateVerificationReport(
        gammas=tuple(float(g) for g in gammas),
        n_states=n_states,
        max_infidelity=float(max(infidelities)),
        max_success_deviation=float(max(abs(p - IDEAL_SUCCESS_PROBABILITY) for p in success_probs)),
        success_spread=float(max(success_probs) - min(success_probs)),
        tolerance=tolerance,
    )
    log.info(
        f"Gate verification over {len(gammas)} meter settings x {n_states} signals: "
        f"max infidelity {report.max_infidelity:.3e}, max success deviation {report.max_success_deviation:.3e}"
    )
    return report
