from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Dict
from typing import Sequence
from typing import Union

import numpy as np
from photonics.weakvalues.utils.errors import NormalizationError

NORM_TOLERANCE = 1e-12
REAL_TOLERANCE = 1e-15


@dataclass(frozen=True)
class Polarization:
    """Single-photon polarization alpha|H> + beta|V>."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        if not all(math.isfinite(x) for x in (alpha.real, alpha.imag, beta.real, beta.imag)):
            raise ValueError(f"Polarization amplitudes must be finite (got alpha={alpha}, beta={beta})")

        norm_squared = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm_squared - 1.0) > NORM_TOLERANCE:
            raise NormalizationError(
                f"Polarization amplitudes must satisfy |alpha|^2 + |beta|^2 = 1 (got {norm_squared!r})"
            )

        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @staticmethod
    def from_angle(degrees: float) -> Polarization:
        """cos(theta)|H> + sin(theta)|V>, with theta given in degrees."""
        radians = math.radians(degrees)
        return Polarization(math.cos(radians), math.sin(radians))

    @staticmethod
    def from_amplitudes(alpha: complex, beta: complex, normalize: bool = False) -> Polarization:
        if normalize:
            norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
            if norm == 0.0:
                raise NormalizationError("Cannot normalize a zero polarization vector")
            alpha, beta = alpha / norm, beta / norm
        return Polarization(alpha, beta)

    @staticmethod
    def from_vector(vector: Sequence[complex], normalize: bool = False) -> Polarization:
        alpha, beta = (complex(x) for x in np.asarray(vector, dtype=complex).reshape(-1))
        return Polarization.from_amplitudes(alpha, beta, normalize=normalize)

    @staticmethod
    def from_s1(s1: float) -> Polarization:
        """The real state cos(theta)|H> + sin(theta)|V> with theta in [0, pi/2] whose <S1> equals s1."""
        if not -1.0 <= s1 <= 1.0:
            raise ValueError(f"<S1> must lie in [-1, 1] (got {s1})")
        theta = 0.5 * math.acos(s1)
        return Polarization(math.cos(theta), math.sin(theta))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def is_real(self) -> bool:
        return abs(self.alpha.imag) <= REAL_TOLERANCE and abs(self.beta.imag) <= REAL_TOLERANCE

    def orthogonal(self) -> Polarization:
        return Polarization(-self.beta.conjugate(), self.alpha.conjugate())

    def overlap(self, other: Polarization) -> complex:
        """<self|other>"""
        return complex(np.vdot(self.vector, other.vector))

    def __repr__(self):
        return f"Polarization(alpha={self.alpha:.6g}, beta={self.beta:.6g})"


_SQRT_HALF = math.sqrt(0.5)

H = Polarization(1.0, 0.0)
V = Polarization(0.0, 1.0)
D = Polarization(_SQRT_HALF, _SQRT_HALF)
A = Polarization(_SQRT_HALF, -_SQRT_HALF)
R = Polarization(_SQRT_HALF, 1j * _SQRT_HALF)
L = Polarization(_SQRT_HALF, -1j * _SQRT_HALF)

NAMED_STATES: Dict[str, Polarization] = {"H": H, "V": V, "D": D, "A": A, "R": R, "L": L}

# postselection targets are ordinary qubit states; the named labels resolve through NAMED_STATES
PostselectState = Polarization


def resolve_state(state: Union[str, Polarization]) -> Polarization:
    if isinstance(state, Polarization):
        return state
    try:
        return NAMED_STATES[state]
    except KeyError:
        raise ValueError(f'Unknown named polarization state "{state}" (known: {list(NAMED_STATES)})')


def relative_phase(psi: Polarization) -> float:
    """arg(beta) - arg(alpha), or 0 when either amplitude vanishes."""
    if psi.alpha == 0 or psi.beta == 0:
        return 0.0
    return cmath.phase(psi.beta) - cmath.phase(psi.alpha)
