from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from types import MappingProxyType
from typing import Callable
from typing import Mapping
from typing import Union

import numpy as np
from photonics.weakvalues.utils.errors import NormalizationError
from photonics.weakvalues.utils.errors import ParameterRangeError

log = logging.getLogger(__name__)

RNG_ALGORITHM = "Philox"
DISTRIBUTION_TOLERANCE = 1e-9

KNOWLEDGE_OUTCOMES = ("HH", "HV", "VH", "VV")
WEAK_VALUE_OUTCOMES = ("H", "V")

Seed = Union[int, np.random.SeedSequence]


class RunType(IntEnum):
    KNOWLEDGE = 0
    WEAK_VALUE = 1


@dataclass(frozen=True, eq=False)
class CountSample:
    """Detected counts per outcome over a run of the given duration."""

    counts: Mapping[str, int]
    duration: float

    def __post_init__(self):
        validated = {}
        for outcome, count in self.counts.items():
            if int(count) != count or count < 0:
                raise ValueError(f'Count for outcome "{outcome}" must be a non-negative integer (got {count})')
            validated[outcome] = int(count)
        object.__setattr__(self, "counts", MappingProxyType(validated))

        if self.duration < 0:
            raise ValueError(f"CountSample duration must be non-negative (got {self.duration})")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, outcome: str) -> int:
        return self.counts.get(outcome, 0)

    def __eq__(self, other):
        if not isinstance(other, CountSample):
            return False
        return dict(self.counts) == dict(other.counts) and self.duration == other.duration

    def __repr__(self):
        return f"CountSample({dict(self.counts)}, duration={self.duration:g}s)"


def make_rng(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def stream_seed(master_seed: int, grid_index: int, run_type: RunType) -> np.random.SeedSequence:
    """Independent stream for one (grid point, run type), so results do not depend on evaluation order."""
    return np.random.SeedSequence(master_seed, spawn_key=(grid_index, int(run_type)))


def sample_counts(true_probs: Mapping[str, float], rate: float, duration: float, seed: Seed) -> CountSample:
    """Independent Poisson counts with means rate * duration * p, drawn in the mapping's iteration order."""
    outcomes = list(true_probs)
    probabilities = np.array([true_probs[outcome] for outcome in outcomes], dtype=float)
    if np.any(probabilities < 0) or abs(probabilities.sum() - 1.0) > DISTRIBUTION_TOLERANCE:
        raise NormalizationError(f"Outcome probabilities must be non-negative and sum to 1 (got {dict(true_probs)})")
    if rate < 0 or duration < 0:
        raise ParameterRangeError(f"Rate and duration must be non-negative (got {rate}, {duration})")

    if rate * duration == 0:
        return CountSample({outcome: 0 for outcome in outcomes}, duration)

    draws = make_rng(seed).poisson(rate * duration * probabilities)
    return CountSample(dict(zip(outcomes, (int(n) for n in draws))), duration)


def bootstrap_sigma(
    sample: CountSample,
    estimator: Callable[[CountSample], float],
    n_resamples: int = 10_000,
    seed: Seed = 0,
) -> float:
    """
    Spread of an estimator under parametric Poisson resampling of the observed counts.  Resamples on which the
    estimator is undefined are skipped.
    """
    outcomes = list(sample.counts)
    observed = np.array([sample[outcome] for outcome in outcomes], dtype=float)
    resampled = make_rng(seed).poisson(observed, size=(n_resamples, len(outcomes)))

    values = []
    for row in resampled:
        try:
            values.append(estimator(CountSample(dict(zip(outcomes, (int(n) for n in row))), sample.duration)))
        except ValueError:
            continue

    if len(values) < 2:
        raise ValueError(f"Bootstrap produced only {len(values)} usable resamples")
    return float(np.std(values, ddof=1))
