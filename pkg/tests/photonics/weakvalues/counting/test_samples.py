import math
import unittest

import numpy as np
import pytest
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.counting.estimators import estimate_knowledge
from photonics.weakvalues.counting.runplan import RunPlan
from photonics.weakvalues.counting.samples import bootstrap_sigma
from photonics.weakvalues.counting.samples import CountSample
from photonics.weakvalues.counting.samples import RunType
from photonics.weakvalues.counting.samples import sample_counts
from photonics.weakvalues.counting.samples import stream_seed
from photonics.weakvalues.imperfection.model import model_coincidence_distribution
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.utils.errors import NormalizationError
from photonics.weakvalues.utils.errors import ParameterRangeError

UNIFORM = {"HH": 0.25, "HV": 0.25, "VH": 0.25, "VV": 0.25}


class CountSampleTestCase(unittest.TestCase):
    def test_missing_outcomes_count_zero(self):
        sample = CountSample({"H": 3}, duration=1.0)
        self.assertEqual(0, sample["V"])
        self.assertEqual(3, sample.total)

    def test_counts_are_read_only(self):
        sample = CountSample({"H": 3, "V": 1}, duration=1.0)
        with self.assertRaises(TypeError):
            sample.counts["H"] = 4

    def test_validation(self):
        with self.assertRaises(ValueError):
            CountSample({"H": -1}, duration=1.0)
        with self.assertRaises(ValueError):
            CountSample({"H": 1.5}, duration=1.0)
        with self.assertRaises(ValueError):
            CountSample({"H": 1}, duration=-1.0)


class SampleCountsTestCase(unittest.TestCase):
    def test_same_stream_gives_same_counts(self):
        first = sample_counts(UNIFORM, 44.6, 100, stream_seed(7, 2, RunType.KNOWLEDGE))
        second = sample_counts(UNIFORM, 44.6, 100, stream_seed(7, 2, RunType.KNOWLEDGE))
        self.assertEqual(first, second)

    def test_streams_are_independent(self):
        seeds = [stream_seed(7, 2, RunType.KNOWLEDGE), stream_seed(7, 2, RunType.WEAK_VALUE), stream_seed(7, 3, 0)]
        samples = [sample_counts(UNIFORM, 44.6, 100, seed) for seed in seeds]
        self.assertNotEqual(samples[0], samples[1])
        self.assertNotEqual(samples[0], samples[2])

    def test_zero_exposure_gives_no_counts(self):
        sample = sample_counts(UNIFORM, 44.6, 0, 0)
        self.assertEqual(0, sample.total)
        self.assertEqual(set(UNIFORM), set(sample.counts))

    def test_means_follow_probabilities(self):
        probabilities = {"H": 0.7, "V": 0.3}
        sample = sample_counts(probabilities, 1e6, 1.0, 1)
        for outcome, p in probabilities.items():
            mean = 1e6 * p
            self.assertLess(abs(sample[outcome] - mean), 5 * math.sqrt(mean))

    def test_invalid_inputs(self):
        with self.assertRaises(NormalizationError):
            sample_counts({"H": 0.7, "V": 0.7}, 1.0, 1.0, 0)
        with self.assertRaises(NormalizationError):
            sample_counts({"H": 1.2, "V": -0.2}, 1.0, 1.0, 0)
        with self.assertRaises(ParameterRangeError):
            sample_counts({"H": 1.0}, -1.0, 1.0, 0)


class BootstrapTestCase(unittest.TestCase):
    def test_matches_analytic_knowledge_sigma(self):
        sample = CountSample({"HH": 300, "VV": 290, "HV": 200, "VH": 210}, duration=100)

        sigma = bootstrap_sigma(sample, lambda s: estimate_knowledge(s).value, n_resamples=4000, seed=3)

        self.assertAlmostEqual(estimate_knowledge(sample).sigma, sigma, delta=0.1 * sigma)

    def test_requires_usable_resamples(self):
        with self.assertRaises(ValueError):
            bootstrap_sigma(CountSample({"H": 0, "V": 0}, duration=1), lambda s: estimate_knowledge(s).value, 10)


class RunPlanTestCase(unittest.TestCase):
    def test_defaults(self):
        plan = RunPlan()
        self.assertAlmostEqual(4460, plan.unpostselected_rate * plan.duration_K)
        self.assertAlmostEqual(520, plan.postselected_rate * plan.duration_wv)

    def test_scaled_and_reseeded(self):
        plan = RunPlan().scaled(10).with_seed(4)
        self.assertEqual(1000.0, plan.duration_K)
        self.assertEqual(10000.0, plan.duration_wv)
        self.assertEqual(4, plan.seed)
        self.assertEqual(4, plan.to_dict()["seed"])

    def test_validation(self):
        for kwargs in ({"duration_K": -1}, {"postselected_rate": float("inf")}, {"seed": -2}, {"seed": 1.5}):
            with self.assertRaises(ParameterRangeError):
                RunPlan(**kwargs)


def _calibration_estimates(K: float, n_seeds: int):
    probabilities = model_coincidence_distribution(ImperfectionParams(), MeterSetting.from_strength(K))
    plan = RunPlan()
    return [
        estimate_knowledge(
            sample_counts(
                probabilities, plan.unpostselected_rate, plan.duration_K, stream_seed(seed, 0, RunType.KNOWLEDGE)
            )
        )
        for seed in range(n_seeds)
    ]


def test_knowledge_sigma_at_small_strength():
    estimates = _calibration_estimates(0.006, 1000)

    sigmas = np.array([e.sigma for e in estimates])
    values = np.array([e.value for e in estimates])

    assert sigmas.mean() == pytest.approx(0.01497, abs=5e-4)
    assert values.std(ddof=1) == pytest.approx(0.01497, rel=0.1)
    assert values.mean() == pytest.approx(0.006, abs=2e-3)


def test_knowledge_interval_coverage():
    estimates = _calibration_estimates(0.5, 1000)

    covered = [e.lower <= 0.5 <= e.upper for e in estimates]

    assert 0.62 <= np.mean(covered) <= 0.75
