from typing import Optional


class WeakValuesError(ValueError):
    """Base class for all library errors.  Each subclass carries a stable ``code`` used for exit codes and row flags."""

    code: str = "error"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class UnknownModeError(WeakValuesError):
    code = "unknown-mode"


class PhotonCapExceededError(WeakValuesError):
    code = "photon-cap-exceeded"


class InvalidTransmissivityError(WeakValuesError):
    code = "invalid-transmissivity"


class NormalizationError(WeakValuesError):
    code = "not-normalized"


class IndeterminateStrengthError(WeakValuesError):
    """Raised wherever a quantity requires division by a measurement strength K which is zero."""

    code = "weak-value-unbounded"


class PostselectionImpossibleError(WeakValuesError):
    code = "postselection-impossible"


class DivergentWeakValueError(WeakValuesError):
    code = "weak-value-divergent"


class InfeasibleTargetError(WeakValuesError):
    code = "infeasible-target"


class InversionRangeError(WeakValuesError):
    code = "inversion-out-of-range"


class TomographyError(WeakValuesError):
    code = "singular-tomography-basis"


class EmptyCountsError(WeakValuesError):
    code = "no-counts"


class PhotonNumberError(WeakValuesError):
    code = "photon-number"


class ParameterRangeError(WeakValuesError):
    code = "out-of-range"
