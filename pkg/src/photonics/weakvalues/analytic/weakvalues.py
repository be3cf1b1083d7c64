"""
Postselected probabilities and weak values of S1 for the ideal device.

For signal alpha|H> + beta|V> and meter gamma|H> + gammabar|V>, the coincidence-conditioned joint state is
    (alpha gamma |H>s + beta gammabar |V>s)|H>m + (alpha gammabar |H>s + beta gamma |V>s)|V>m
and every quantity in this module is derived from those four amplitudes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple
from typing import Optional
from typing import Union

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import A
from photonics.weakvalues.analytic.polarization import D
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.analytic.polarization import PostselectState
from photonics.weakvalues.analytic.polarization import resolve_state
from photonics.weakvalues.utils.errors import DivergentWeakValueError
from photonics.weakvalues.utils.errors import IndeterminateStrengthError
from photonics.weakvalues.utils.errors import InfeasibleTargetError
from photonics.weakvalues.utils.errors import NormalizationError
from photonics.weakvalues.utils.errors import PostselectionImpossibleError
from scipy.optimize import brentq

log = logging.getLogger(__name__)

# below this postselection probability the conditional meter statistics are undefined
POSTSELECTION_TOLERANCE = 1e-15
DISTRIBUTION_TOLERANCE = 1e-9

Postselection = Union[str, PostselectState]


def ideal_output_amplitudes(psi: Polarization, meter: MeterSetting) -> np.ndarray:
    """The conditioned two-qubit amplitudes arranged as [signal, meter]."""
    return np.array(
        [
            [psi.alpha * meter.gamma, psi.alpha * meter.gammabar],
            [psi.beta * meter.gammabar, psi.beta * meter.gamma],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class PostselectedProbabilities:
    """Meter statistics conditioned on the postselection, which are None when the postselection cannot occur."""

    p_meter_h_given_post: Optional[float]
    p_meter_v_given_post: Optional[float]
    p_post: float

    @property
    def defined(self) -> bool:
        return self.p_meter_h_given_post is not None

    def require_defined(self) -> PostselectedProbabilities:
        if not self.defined:
            raise PostselectionImpossibleError(
                f"Postselection probability {self.p_post:.3g} is zero; conditional meter statistics are undefined"
            )
        return self


def postselected_probs(
    psi: Polarization, meter: MeterSetting, post: Postselection = "A"
) -> PostselectedProbabilities:
    post_state = resolve_state(post)
    # meter amplitudes left after projecting the signal onto the postselection state
    conditioned = post_state.vector.conj() @ ideal_output_amplitudes(psi, meter)
    joint = np.abs(conditioned) ** 2
    p_post = float(joint.sum())

    if p_post < POSTSELECTION_TOLERANCE:
        log.debug(f"Postselection onto {post_state} is impossible for {psi}, {meter}")
        return PostselectedProbabilities(None, None, p_post)

    return PostselectedProbabilities(float(joint[0] / p_post), float(joint[1] / p_post), p_post)


def weak_value_from_probs(p_h: float, p_v: float, K: float) -> float:
    if p_h < 0 or p_v < 0 or abs(p_h + p_v - 1.0) > DISTRIBUTION_TOLERANCE:
        raise NormalizationError(f"Meter probabilities must be non-negative and sum to 1 (got {p_h}, {p_v})")
    if K == 0:
        raise IndeterminateStrengthError("Weak value is unbounded at zero measurement strength")
    return (p_h - p_v) / K


def knowledge_from_probs(p_hh: float, p_vv: float, p_hv: float, p_vh: float) -> float:
    """Signal-meter correlation K = P_HH + P_VV - P_HV - P_VH, measured with signal input |D>."""
    probabilities = (p_hh, p_vv, p_hv, p_vh)
    if any(p < 0 for p in probabilities) or abs(sum(probabilities) - 1.0) > DISTRIBUTION_TOLERANCE:
        raise NormalizationError(f"Coincidence probabilities must be non-negative and sum to 1 (got {probabilities})")
    return p_hh + p_vv - p_hv - p_vh


def weak_value_closed_form(psi: Polarization, meter: MeterSetting, post: Postselection = "A") -> float:
    """
    Postselected mean of S1 from the closed form
        (|p alpha|^2 - |q beta|^2) / (|p alpha|^2 + |q beta|^2 + 4 gamma gammabar Re[conj(p) q alpha conj(beta)])
    for postselection state p|H> + q|V>.  The denominator is the postselection probability; for |A> this is
    (|alpha|^2 - |beta|^2) / (1 - 4 gamma gammabar Re[alpha conj(beta)]), finite even at K = 0.
    """
    post_state = resolve_state(post)
    weighted_h = abs(post_state.alpha * psi.alpha) ** 2
    weighted_v = abs(post_state.beta * psi.beta) ** 2
    cross = (post_state.alpha.conjugate() * post_state.beta * psi.alpha * psi.beta.conjugate()).real

    denominator = weighted_h + weighted_v + 4.0 * meter.gamma * meter.gammabar * cross
    if abs(denominator) < POSTSELECTION_TOLERANCE:
        raise DivergentWeakValueError(
            f"Weak value diverges: postselection onto {post_state} is orthogonal to {psi} at {meter}"
        )
    return (weighted_h - weighted_v) / denominator


def weak_value_analytic(psi: Polarization, meter: MeterSetting, post: Postselection = "A") -> float:
    """
    Expected postselected value of S1.  Real amplitudes use the closed form; complex ones take the meter statistics
    route, which requires a nonzero measurement strength.
    """
    post_state = resolve_state(post)
    if psi.is_real() and post_state.is_real():
        return weak_value_closed_form(psi, meter, post_state)

    probabilities = postselected_probs(psi, meter, post_state)
    if not probabilities.defined:
        raise DivergentWeakValueError(f"Weak value diverges: postselection onto {post_state} cannot occur for {psi}")
    if meter.is_zero_strength:
        raise IndeterminateStrengthError("Weak value of a complex-amplitude state is unbounded at zero strength")
    return weak_value_from_probs(probabilities.p_meter_h_given_post, probabilities.p_meter_v_given_post, meter.K)


class Decomposition(NamedTuple):
    term_A: float
    term_D: float
    total: float


def expectation_decomposition(psi: Polarization, meter: MeterSetting) -> Decomposition:
    """<S1> split over the complementary postselections |A> and |D>, each term being weak value times probability."""
    if meter.is_zero_strength:
        raise IndeterminateStrengthError("Decomposition over postselections requires a nonzero measurement strength")

    def term(post: Polarization) -> float:
        probabilities = postselected_probs(psi, meter, post)
        if not probabilities.defined:
            return 0.0
        return weak_value_analytic(psi, meter, post) * probabilities.p_post

    term_a, term_d = term(A), term(D)
    return Decomposition(term_a, term_d, term_a + term_d)


def expected_s1_from_weak_value(weak_value: float, p_post: float) -> float:
    """
    <S1> recovered from a single postselection, assuming the complementary term contributes equally, as it does for
    the ideal device.
    """
    return 2.0 * weak_value * p_post


def strength_at_weak_value(
    psi: Polarization, target: float = 1.0, post: Postselection = "A", lower_strength: float = 1e-12
) -> float:
    """The measurement strength K in (0, 1] at which the postselected value of psi equals target."""

    def residual(K: float) -> float:
        return weak_value_analytic(psi, MeterSetting.from_strength(K), post) - target

    low, high = residual(lower_strength), residual(1.0)
    if low == 0.0:
        return lower_strength
    if high == 0.0:
        return 1.0
    if math.copysign(1.0, low) == math.copysign(1.0, high):
        raise InfeasibleTargetError(
            f"Postselected value of {psi} does not cross {target} for K in [{lower_strength}, 1] "
            f"(ranges {low + target:.6g} to {high + target:.6g})"
        )
    return float(brentq(residual, lower_strength, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def strong_crossover_strength(psi: Polarization, post: Postselection = "A") -> float:
    """Strength at which the postselected value returns inside the spectrum of S1, i.e. equals 1."""
    return strength_at_weak_value(psi, 1.0, post)


def is_extra_spectral(psi: Polarization, meter: MeterSetting, post: Postselection = "A") -> bool:
    return abs(weak_value_analytic(psi, meter, post)) > 1.0
