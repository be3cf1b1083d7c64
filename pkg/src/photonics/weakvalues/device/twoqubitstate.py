from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from typing import Sequence

import numpy as np
from photonics.weakvalues.utils.errors import NormalizationError

# Computational basis order of signal ⊗ meter amplitudes; index = 2 * signal + meter with H=0, V=1
BASIS_LABELS = ("HH", "HV", "VH", "VV")
POLARIZATION_INDEX = {"H": 0, "V": 1}

NORM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """
    Normalized signal ⊗ meter polarization state conditioned on a successful (coincidence) outcome, together with the
    probability of that outcome.  An empty state (success_prob == 0) carries zero amplitudes and is flagged.
    """

    amplitudes: np.ndarray
    success_prob: float
    empty: bool = field(default=False)

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (4,):
            raise ValueError(f"TwoQubitState requires exactly 4 amplitudes (got shape {amplitudes.shape})")
        object.__setattr__(self, "amplitudes", amplitudes)

        if not (0.0 <= self.success_prob <= 1.0 + NORM_TOLERANCE):
            raise ValueError(f"success_prob must lie in [0, 1] (got {self.success_prob})")

        if self.empty:
            if np.any(amplitudes != 0):
                raise ValueError("An empty TwoQubitState must carry zero amplitudes")
            return

        norm_squared = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_squared - 1.0) > NORM_TOLERANCE:
            raise NormalizationError(f"TwoQubitState amplitudes have squared norm {norm_squared}, expected 1")

    @staticmethod
    def from_unnormalized(amplitudes: Sequence[complex]) -> TwoQubitState:
        """Normalize a conditioned branch, storing its squared norm as the success probability."""
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm_squared = float(np.vdot(amplitudes, amplitudes).real)
        if norm_squared == 0.0:
            return TwoQubitState.empty_state()
        return TwoQubitState(amplitudes / np.sqrt(norm_squared), success_prob=min(norm_squared, 1.0))

    @staticmethod
    def empty_state() -> TwoQubitState:
        return TwoQubitState(np.zeros(4, dtype=complex), success_prob=0.0, empty=True)

    def amplitude(self, signal: str, meter: str) -> complex:
        return complex(self.amplitudes[2 * POLARIZATION_INDEX[signal] + POLARIZATION_INDEX[meter]])

    def as_matrix(self) -> np.ndarray:
        """Amplitudes arranged as [signal, meter]."""
        return self.amplitudes.reshape(2, 2)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        if self.empty:
            return "TwoQubitState(empty)"
        rendered = ", ".join(f"{label}={amp:.6g}" for label, amp in zip(BASIS_LABELS, self.amplitudes))
        return f"TwoQubitState({rendered}; success_prob={self.success_prob:.6g})"
