from __future__ import annotations

import logging
import math

import numpy as np
from photonics.weakvalues.utils.errors import ParameterRangeError

log = logging.getLogger(__name__)

# strengths this close to zero are treated as exactly zero wherever a division by K is required
ZERO_STRENGTH_TOLERANCE = 1e-14


class MeterSetting:
    """
    Meter photon prepared in gamma|H> + gammabar|V> with real gamma in [0, 1].  The measurement strength, or knowledge,
    is K = 2 gamma^2 - 1.  Settings built from a strength keep that K exactly.
    """

    __slots__ = ("_gamma", "_gammabar", "_K")

    _gamma: float
    _gammabar: float
    _K: float

    def __init__(self, gamma: float):
        gamma = float(gamma)
        if not 0.0 <= gamma <= 1.0:
            raise ParameterRangeError(f"Meter amplitude gamma must lie in [0, 1] (got {gamma})")
        gammabar = math.sqrt(max(0.0, 1.0 - gamma * gamma))
        self._initialize(gamma, gammabar, gamma * gamma - gammabar * gammabar)

    @staticmethod
    def from_strength(K: float) -> MeterSetting:
        K = float(K)
        if not -1.0 <= K <= 1.0:
            raise ParameterRangeError(f"Measurement strength K must lie in [-1, 1] (got {K})")
        setting = MeterSetting.__new__(MeterSetting)
        setting._initialize(math.sqrt((1.0 + K) / 2.0), math.sqrt((1.0 - K) / 2.0), K)
        return setting

    def _initialize(self, gamma: float, gammabar: float, K: float):
        object.__setattr__(self, "_gamma", gamma)
        object.__setattr__(self, "_gammabar", gammabar)
        object.__setattr__(self, "_K", K)
        if K < -ZERO_STRENGTH_TOLERANCE:
            log.warning(f"Meter setting gamma={gamma:.6g} gives negative measurement strength K={K:.6g}")

    def __setattr__(self, key, value):
        raise AttributeError("MeterSetting is immutable")

    def __reduce__(self):
        return _restore_meter_setting, (self._gamma, self._gammabar, self._K)

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def gammabar(self) -> float:
        return self._gammabar

    @property
    def K(self) -> float:
        return self._K

    @property
    def is_zero_strength(self) -> bool:
        return abs(self._K) <= ZERO_STRENGTH_TOLERANCE

    @property
    def vector(self) -> np.ndarray:
        return np.array([self._gamma, self._gammabar], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, MeterSetting):
            return False
        return (self._gamma, self._gammabar, self._K) == (other._gamma, other._gammabar, other._K)

    def __hash__(self):
        return hash((self._gamma, self._gammabar, self._K))

    def __repr__(self):
        return f"MeterSetting(gamma={self._gamma:.6g}, gammabar={self._gammabar:.6g}, K={self._K:.6g})"


def _restore_meter_setting(gamma: float, gammabar: float, K: float) -> MeterSetting:
    setting = MeterSetting.__new__(MeterSetting)
    setting._initialize(gamma, gammabar, K)
    return setting
