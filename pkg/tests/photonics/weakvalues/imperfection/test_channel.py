import itertools
import math
import unittest

import numpy as np
import pytest
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import D
from photonics.weakvalues.analytic.polarization import H
from photonics.weakvalues.analytic.weakvalues import postselected_probs
from photonics.weakvalues.device.main import IDEAL_SUCCESS_PROBABILITY
from photonics.weakvalues.device.main import run_device
from photonics.weakvalues.fockengine.distinguishable import Labelling
from photonics.weakvalues.imperfection.channel import distinguishable_device
from photonics.weakvalues.imperfection.channel import ideal_channel
from photonics.weakvalues.imperfection.channel import ideal_kraus
from photonics.weakvalues.imperfection.channel import imperfect_channel
from photonics.weakvalues.imperfection.channel import mismatched_kraus
from photonics.weakvalues.imperfection.channel import TwoQubitChannel
from photonics.weakvalues.imperfection.model import model_postselection
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.utils.errors import ParameterRangeError
from photonics.weakvalues.utils.linalg import is_psd
from photonics.weakvalues.utils.linalg import random_density_matrix

from ..builders import FORTY_TWO_DEGREES
from ..builders import random_channel
from ..builders import random_polarizations


class TwoQubitChannelTestCase(unittest.TestCase):
    def test_identity(self):
        rho = random_density_matrix(np.random.default_rng(1))
        self.assertTrue(np.allclose(rho, TwoQubitChannel.identity().apply(rho)))
        self.assertAlmostEqual(1.0, TwoQubitChannel.identity().success_probability(rho))

    def test_trace_increasing_operators_rejected(self):
        with self.assertRaises(ValueError):
            TwoQubitChannel([2 * np.eye(4)])

    def test_wrong_shape_rejected(self):
        with self.assertRaises(ValueError):
            TwoQubitChannel([np.eye(2)])

    def test_signal_input_requires_meter(self):
        with self.assertRaises(ValueError):
            ideal_channel().apply_to_signal(H)

    def test_mixture_weights_outputs(self):
        rng = np.random.default_rng(4)
        first, second = random_channel(rng), random_channel(rng)
        rho = random_density_matrix(rng)

        mixed = first.mixed_with(second, 0.3)

        expected = 0.3 * first.apply(rho) + 0.7 * second.apply(rho)
        self.assertTrue(np.allclose(expected, mixed.apply(rho), atol=1e-12))

    def test_depolarizing_preserves_success_probability(self):
        rng = np.random.default_rng(6)
        channel = random_channel(rng)
        rho = random_density_matrix(rng)

        noisy = channel.depolarized(1.0)

        self.assertAlmostEqual(channel.success_probability(rho), noisy.success_probability(rho), places=12)
        self.assertTrue(np.allclose(np.eye(4) / 4 * noisy.success_probability(rho), noisy.apply(rho), atol=1e-12))

    def test_random_channels_are_completely_positive(self):
        channel = random_channel(np.random.default_rng(9))
        self.assertTrue(channel.is_completely_positive())
        self.assertAlmostEqual(0.9, channel.max_transmission(), places=10)


class DeviceChannelTestCase(unittest.TestCase):
    def test_ideal_operator(self):
        expected = np.zeros((4, 4))
        # |H><H| ⊗ I + |V><V| ⊗ X over HH, HV, VH, VV
        expected[0, 0] = expected[1, 1] = expected[3, 2] = expected[2, 3] = 1 / 3
        self.assertTrue(np.allclose(expected, ideal_kraus(), atol=1e-12))

    def test_cached_operators_are_read_only(self):
        with self.assertRaises(ValueError):
            ideal_kraus()[0, 0] = 1.0
        with self.assertRaises(ValueError):
            mismatched_kraus()[0][0, 0] = 1.0

    def test_perfect_visibility_matches_fock_device(self):
        rng = np.random.default_rng(12)
        meter = MeterSetting(0.8)
        channel = imperfect_channel(meter, ImperfectionParams())

        for signal in random_polarizations(rng, 100):
            output = channel.apply_to_signal(signal)
            produced = run_device(signal, meter)

            self.assertAlmostEqual(produced.success_prob, np.trace(output).real, places=12)
            self.assertTrue(np.allclose(produced.density(), output / np.trace(output).real, atol=1e-10))

    def test_zero_visibility_destroys_coherence(self):
        for labelling in Labelling:
            params = ImperfectionParams(visibility=0.0, labelling=labelling)
            output = imperfect_channel(MeterSetting(1.0), params).apply_to_signal(D)
            self.assertAlmostEqual(0.0, abs(output[0, 3]), places=12)
            self.assertGreater(output[0, 0].real, 0.0)

    def test_reduced_visibility_raises_postselection_probability(self):
        meter = MeterSetting(math.sqrt(0.5) + 1e-3)
        ideal = postselected_probs(FORTY_TWO_DEGREES, meter).p_post
        imperfect = model_postselection(ImperfectionParams(visibility=0.95), FORTY_TWO_DEGREES, meter).p_post
        self.assertGreater(imperfect, ideal)


class DistinguishableDeviceTestCase(unittest.TestCase):
    def test_h_signal_matches_ideal(self):
        output = distinguishable_device(H, MeterSetting(1.0))

        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        self.assertTrue(np.allclose(expected, output.density, atol=1e-12))
        self.assertAlmostEqual(IDEAL_SUCCESS_PROBABILITY, output.success_prob, places=12)
        self.assertTrue(np.allclose([1, 0, 0, 0], output.joint_distribution, atol=1e-12))

    def test_diagonal_signal_loses_correlation_coherence(self):
        output = distinguishable_device(D, MeterSetting(1.0))
        self.assertAlmostEqual(0.0, abs(output.coherence(0, 3)), places=12)


class ImperfectionParamsTestCase(unittest.TestCase):
    def test_defaults(self):
        params = ImperfectionParams()
        self.assertTrue(params.is_ideal)
        self.assertIs(Labelling.PATH, params.labelling)
        self.assertEqual({"visibility": 1.0, "depol": 0.0, "labelling": "path"}, params.to_dict())

    def test_labelling_from_string(self):
        self.assertIs(Labelling.PHOTON, ImperfectionParams(labelling="PHOTON").labelling)
        with self.assertRaises(ParameterRangeError):
            ImperfectionParams(labelling="mode")

    def test_out_of_range(self):
        for kwargs in ({"visibility": 1.2}, {"visibility": -0.1}, {"depol": 2.0}, {"depol": float("nan")}):
            with self.assertRaises(ParameterRangeError):
                ImperfectionParams(**kwargs)


@pytest.mark.parametrize(
    "visibility,depol", list(itertools.product([0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 0.05, 0.1, 0.5, 1.0]))
)
def test_imperfect_channels_are_physical(visibility, depol, rng):
    channel = imperfect_channel(MeterSetting(0.9), ImperfectionParams(visibility, depol))

    assert channel.is_completely_positive()
    assert channel.is_trace_nonincreasing()
    for signal in random_polarizations(rng, 20):
        output = channel.apply_to_signal(signal)
        assert is_psd(output, atol=1e-12)
        assert 0.0 <= np.trace(output).real <= 1.0
