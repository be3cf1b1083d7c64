from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional
from typing import Tuple

from photonics.weakvalues.counting.samples import CountSample
from photonics.weakvalues.utils.errors import EmptyCountsError
from photonics.weakvalues.utils.errors import IndeterminateStrengthError


@dataclass(frozen=True)
class Estimate:
    """
    A point estimate with its 1-sigma interval.  upper is None when the interval is unbounded above; worst_case holds
    the value recomputed at a 1-sigma shifted measurement strength, where that applies.
    """

    value: float
    sigma: float
    lower: float
    upper: Optional[float]
    worst_case: Optional[float] = None
    unbounded_above: bool = False

    def __post_init__(self):
        if self.sigma < 0 or math.isnan(self.sigma):
            raise ValueError(f"Estimate sigma must be non-negative (got {self.sigma})")
        if self.unbounded_above and self.upper is not None:
            raise ValueError("An estimate unbounded above cannot carry a finite upper bound")
        if self.upper is not None and not self.lower <= self.value <= self.upper:
            raise ValueError(f"Estimate bounds do not enclose the value ({self.lower} <= {self.value} <= {self.upper})")


def _imbalance(n_plus: int, n_minus: int) -> Tuple[float, float]:
    """(n+ - n-) / N with its Poisson standard error 2 sqrt(n+ n- / N^3)."""
    total = n_plus + n_minus
    return (n_plus - n_minus) / total, 2.0 * math.sqrt(n_plus * n_minus / total**3)


def estimate_knowledge(sample: CountSample) -> Estimate:
    """K = (N_HH + N_VV - N_HV - N_VH) / N, with sigma = sqrt((1 - K^2) / N) from independent Poisson counts."""
    if sample.total == 0:
        raise EmptyCountsError("Knowledge estimate requires at least one coincidence count")

    value, sigma = _imbalance(sample["HH"] + sample["VV"], sample["HV"] + sample["VH"])
    return Estimate(value=value, sigma=sigma, lower=value - sigma, upper=value + sigma)


def strength_interval_contains_zero(K_est: Estimate) -> bool:
    """True when the 1-sigma strength interval reaches K = 0, so the weak value has no finite upper bound."""
    return K_est.value - K_est.sigma <= 0.0 <= K_est.value + K_est.sigma


def recompute_at_strength(sample: CountSample, K: float) -> float:
    """Postselected meter imbalance rescaled by K; varying K moves the point along value * K = constant."""
    if sample.total == 0:
        raise EmptyCountsError("Weak value estimate requires postselected counts")
    if K == 0:
        raise IndeterminateStrengthError("Weak value is unbounded at K = 0")
    value, _ = _imbalance(sample["H"], sample["V"])
    return value / K


def estimate_weak_value(sample: CountSample, K_est: Estimate) -> Estimate:
    """
    Weak value from postselected meter counts and an independently measured strength.  sigma carries the counting
    error of the postselected run only; the strength error is reported through worst_case and unbounded_above.
    """
    if sample.total == 0:
        raise EmptyCountsError("Weak value estimate requires postselected counts")
    K_hat = K_est.value
    if K_hat == 0:
        raise IndeterminateStrengthError("Weak value is unbounded: estimated K is exactly zero")

    imbalance, imbalance_sigma = _imbalance(sample["H"], sample["V"])
    value = imbalance / K_hat
    sigma = imbalance_sigma / abs(K_hat)

    shifted_K = K_hat + math.copysign(K_est.sigma, K_hat)
    worst_case = recompute_at_strength(sample, shifted_K)
    unbounded_above = strength_interval_contains_zero(K_est)

    return Estimate(
        value=value,
        sigma=sigma,
        lower=value - sigma,
        upper=None if unbounded_above else value + sigma,
        worst_case=worst_case,
        unbounded_above=unbounded_above,
    )
