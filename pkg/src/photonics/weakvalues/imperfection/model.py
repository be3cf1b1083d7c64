"""Model predictions of the imperfect device: postselection statistics, visibility fitting and inversion to <S1>."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import D
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.analytic.polarization import resolve_state
from photonics.weakvalues.analytic.weakvalues import expected_s1_from_weak_value
from photonics.weakvalues.analytic.weakvalues import Postselection
from photonics.weakvalues.analytic.weakvalues import POSTSELECTION_TOLERANCE
from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.device.twoqubitstate import BASIS_LABELS
from photonics.weakvalues.fockengine.distinguishable import Labelling
from photonics.weakvalues.imperfection.channel import imperfect_channel
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.utils.errors import IndeterminateStrengthError
from photonics.weakvalues.utils.errors import InfeasibleTargetError
from photonics.weakvalues.utils.errors import InversionRangeError
from photonics.weakvalues.utils.errors import ParameterRangeError
from photonics.weakvalues.utils.errors import PostselectionImpossibleError
from photonics.weakvalues.utils.linalg import projector
from scipy.optimize import brentq

log = logging.getLogger(__name__)

FIT_TOLERANCE = 1e-12
MONOTONICITY_GRID_POINTS = 21

_METER_H = projector([1.0, 0.0])
_METER_V = projector([0.0, 1.0])


@dataclass(frozen=True)
class ModelPostselection:
    p_post: float
    p_meter_h_given_post: Optional[float]
    p_meter_v_given_post: Optional[float]
    success_prob: float

    @property
    def defined(self) -> bool:
        return self.p_meter_h_given_post is not None


def model_postselection(
    params: ImperfectionParams,
    psi: Polarization,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    post: Postselection = "A",
) -> ModelPostselection:
    """Heralded postselection probability and conditional meter statistics predicted by the imperfect device."""
    output = imperfect_channel(meter, params, cfg).apply_to_signal(psi)
    success_prob = float(np.trace(output).real)
    if success_prob <= 0.0:
        raise PostselectionImpossibleError(f"Device with {params} never heralds success for {psi}")

    post_projector = projector(resolve_state(post).vector)
    joint_h = float(np.trace(np.kron(post_projector, _METER_H) @ output).real) / success_prob
    joint_v = float(np.trace(np.kron(post_projector, _METER_V) @ output).real) / success_prob
    p_post = joint_h + joint_v

    if p_post < POSTSELECTION_TOLERANCE:
        return ModelPostselection(p_post, None, None, success_prob)
    return ModelPostselection(p_post, joint_h / p_post, joint_v / p_post, success_prob)


def model_coincidence_distribution(
    params: ImperfectionParams,
    meter: MeterSetting,
    signal: Polarization = D,
    cfg: DeviceConfig = DeviceConfig(),
) -> Dict[str, float]:
    """Heralded signal/meter coincidence probabilities, keyed HH, HV, VH, VV; with signal |D> these calibrate K."""
    output = imperfect_channel(meter, params, cfg).apply_to_signal(signal)
    probabilities = np.clip(np.real(np.diag(output)), 0.0, None)
    probabilities = probabilities / probabilities.sum()
    return dict(zip(BASIS_LABELS, (float(p) for p in probabilities)))


def model_postselected_term(
    params: ImperfectionParams,
    psi: Polarization,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    post: Postselection = "A",
) -> float:
    """Weak value times postselection probability, (P(post, H) - P(post, V)) / K."""
    if meter.is_zero_strength:
        raise IndeterminateStrengthError("Postselected meter imbalance cannot be rescaled at zero strength")
    prediction = model_postselection(params, psi, meter, cfg, post)
    if not prediction.defined:
        return 0.0
    return prediction.p_post * (prediction.p_meter_h_given_post - prediction.p_meter_v_given_post) / meter.K


def model_weak_value(
    params: ImperfectionParams,
    psi: Polarization,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    post: Postselection = "A",
) -> float:
    if meter.is_zero_strength:
        raise IndeterminateStrengthError("Model weak value is unbounded at zero measurement strength")
    prediction = model_postselection(params, psi, meter, cfg, post)
    if not prediction.defined:
        raise PostselectionImpossibleError(f"Postselection onto {resolve_state(post)} cannot occur for {psi}")
    return (prediction.p_meter_h_given_post - prediction.p_meter_v_given_post) / meter.K


def model_weak_value_curve(
    params: ImperfectionParams,
    psi: Polarization,
    K_grid: Sequence[float],
    cfg: DeviceConfig = DeviceConfig(),
    post: Postselection = "A",
) -> List[Tuple[float, float]]:
    for K in K_grid:
        if K == 0.0:
            raise IndeterminateStrengthError("Model weak value curve cannot be evaluated at K = 0")
        if not 0.0 < K <= 1.0:
            raise ParameterRangeError(f"Model weak value curve requires K in (0, 1] (got {K})")

    return [(float(K), model_weak_value(params, psi, MeterSetting.from_strength(K), cfg, post)) for K in K_grid]


def _find_root(f: Callable[[float], float], low: float, high: float, description: str) -> float:
    """
    Root of f on [low, high].  The sign structure is checked on a grid first; the root is bracketed by the first sign
    change found, so the search does not rely on f being monotone.
    """
    grid = np.linspace(low, high, MONOTONICITY_GRID_POINTS)
    values = [f(x) for x in grid]

    for x, value in zip(grid, values):
        if value == 0.0:
            return float(x)

    differences = np.diff(values)
    if not (np.all(differences < 0) or np.all(differences > 0)):
        log.warning(f"{description} is not monotone on [{low}, {high}]; using the first bracketing interval")

    for i in range(len(grid) - 1):
        if np.sign(values[i]) != np.sign(values[i + 1]):
            return float(brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))

    raise InfeasibleTargetError(f"{description} has no root on [{low}, {high}]")


def fit_visibility(
    target_p_post: float,
    psi: Polarization,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    labelling: Labelling = Labelling.PATH,
    post: Postselection = "A",
) -> ImperfectionParams:
    """The visibility (with no white noise) at which the model's postselection probability equals the target."""

    def p_post_at(visibility: float) -> float:
        return model_postselection(ImperfectionParams(visibility, 0.0, labelling), psi, meter, cfg, post).p_post

    ideal, fully_mismatched = p_post_at(1.0), p_post_at(0.0)
    if abs(target_p_post - ideal) <= FIT_TOLERANCE:
        return ImperfectionParams(1.0, 0.0, labelling)

    lowest, highest = min(ideal, fully_mismatched), max(ideal, fully_mismatched)
    if target_p_post < ideal and ideal <= fully_mismatched:
        raise InfeasibleTargetError(
            f"Target postselection probability {target_p_post:.6g} is below the ideal device's {ideal:.6g}"
        )
    if not lowest - FIT_TOLERANCE <= target_p_post <= highest + FIT_TOLERANCE:
        raise InfeasibleTargetError(
            f"Target postselection probability {target_p_post:.6g} lies outside the model's range "
            f"[{lowest:.6g}, {highest:.6g}]"
        )

    visibility = _find_root(lambda v: p_post_at(v) - target_p_post, 0.0, 1.0, "Model postselection probability")
    visibility = min(max(visibility, 0.0), 1.0)
    log.info(f"Fitted visibility {visibility:.9f} to postselection probability {target_p_post:.6g}")
    return ImperfectionParams(visibility, 0.0, labelling)


def invert_s1(
    measured_weak_value: float,
    measured_p_post: float,
    params: ImperfectionParams,
    meter: MeterSetting,
    cfg: DeviceConfig = DeviceConfig(),
    post: Postselection = "A",
) -> float:
    """
    <S1> of the real preselected state whose modelled postselected term (weak value times postselection probability)
    matches the measured one.  For the ideal device this is twice the measured term.
    """
    measured_term = measured_weak_value * measured_p_post

    if params.is_ideal:
        s1 = expected_s1_from_weak_value(measured_weak_value, measured_p_post)
        if abs(s1) > 1.0 + FIT_TOLERANCE:
            raise InversionRangeError(f"Measured postselected term {measured_term:.6g} implies <S1> = {s1:.6g}")
        return float(np.clip(s1, -1.0, 1.0))

    def residual(s1: float) -> float:
        return model_postselected_term(params, Polarization.from_s1(s1), meter, cfg, post) - measured_term

    try:
        return _find_root(residual, -1.0, 1.0, "Modelled postselected term")
    except InfeasibleTargetError:
        raise InversionRangeError(
            f"Measured postselected term {measured_term:.6g} lies outside the range reachable by {params} at {meter}"
        )
