import math
import unittest

import numpy as np
from photonics.weakvalues.fockengine.beamsplitter import apply_beam_splitter
from photonics.weakvalues.fockengine.beamsplitter import BeamSplitterSpec
from photonics.weakvalues.fockengine.fockstate import FockState
from photonics.weakvalues.fockengine.modes import ModeRegistry
from photonics.weakvalues.utils.errors import InvalidTransmissivityError
from photonics.weakvalues.utils.errors import UnknownModeError

TWO_MODES = ModeRegistry(["a", "b"])


class BeamSplitterSpecTestCase(unittest.TestCase):
    def test_matrix_is_orthogonal(self):
        for eta in (0.0, 1 / 3, 0.5, 0.9, 1.0):
            matrix = BeamSplitterSpec("a", "b", eta).matrix()
            self.assertTrue(np.allclose(matrix.conj().T @ matrix, np.eye(2)))

    def test_inverse_undoes_splitter(self):
        bs = BeamSplitterSpec("a", "b", 1 / 3)
        state = FockState.from_occupation(TWO_MODES, {"a": 1, "b": 1})

        restored = apply_beam_splitter(apply_beam_splitter(state, bs), bs.inverse())

        self.assertAlmostEqual(1.0, abs(restored.amplitude_of({"a": 1, "b": 1})), places=12)

    def test_invalid_transmissivity(self):
        for eta in (-0.1, 1.5, float("nan")):
            with self.assertRaises(InvalidTransmissivityError):
                BeamSplitterSpec("a", "b", eta)

    def test_identical_modes_rejected(self):
        with self.assertRaises(ValueError):
            BeamSplitterSpec("a", "a", 0.5)

    def test_unknown_mode(self):
        state = FockState.from_occupation(TWO_MODES, {"a": 1})
        with self.assertRaises(UnknownModeError):
            apply_beam_splitter(state, BeamSplitterSpec("a", "c", 0.5))


class TwoPhotonInterferenceTestCase(unittest.TestCase):
    def setUp(self):
        self.one_one = FockState.from_occupation(TWO_MODES, {"a": 1, "b": 1})

    def test_balanced_splitter_suppresses_coincidences(self):
        output = apply_beam_splitter(self.one_one, BeamSplitterSpec("a", "b", 0.5))

        self.assertEqual(0.0, output.amplitude_of({"a": 1, "b": 1}))
        self.assertAlmostEqual(0.5, output.probability_of({"a": 2}))
        self.assertAlmostEqual(0.5, output.probability_of({"b": 2}))
        self.assertEqual(2, len(output))

    def test_one_third_splitter_flips_coincidence_sign(self):
        output = apply_beam_splitter(self.one_one, BeamSplitterSpec("a", "b", 1 / 3))

        self.assertAlmostEqual(-1 / 3, output.amplitude_of({"a": 1, "b": 1}).real, places=12)
        self.assertAlmostEqual(4 / 9, output.probability_of({"a": 2}), places=12)
        self.assertAlmostEqual(4 / 9, output.probability_of({"b": 2}), places=12)

    def test_full_transmission_is_identity(self):
        state = FockState(TWO_MODES, {(1, 1): 0.6, (2, 0): 0.8})
        output = apply_beam_splitter(state, BeamSplitterSpec("a", "b", 1.0))
        self.assertEqual(state.terms, output.terms)

    def test_photon_pair_in_one_port(self):
        output = apply_beam_splitter(FockState.from_occupation(TWO_MODES, {"a": 2}), BeamSplitterSpec("a", "b", 0.5))

        self.assertAlmostEqual(0.25, output.probability_of({"a": 2}))
        self.assertAlmostEqual(0.5, output.probability_of({"a": 1, "b": 1}))
        self.assertAlmostEqual(0.25, output.probability_of({"b": 2}))

    def test_single_photon_follows_matrix(self):
        bs = BeamSplitterSpec("a", "b", 0.3)
        output = apply_beam_splitter(FockState.from_occupation(TWO_MODES, {"a": 1}), bs)

        self.assertAlmostEqual(bs.matrix()[0, 0], output.amplitude_of({"a": 1}))
        self.assertAlmostEqual(bs.matrix()[1, 0], output.amplitude_of({"b": 1}))


class NormPreservationTestCase(unittest.TestCase):
    def test_random_networks_preserve_norm(self):
        rng = np.random.default_rng(11)
        registry = ModeRegistry(["m0", "m1", "m2", "m3"])
        labels = list(registry)

        for _ in range(20):
            photons = []
            for _ in range(2):
                amplitudes = rng.normal(size=4) + 1j * rng.normal(size=4)
                amplitudes /= math.sqrt(2) * np.linalg.norm(amplitudes)
                photons.append(dict(zip(labels, amplitudes)))
            state = FockState.from_creation(registry, photons).normalized()

            for _ in range(10):
                mode_a, mode_b = rng.choice(labels, size=2, replace=False)
                state = apply_beam_splitter(state, BeamSplitterSpec(str(mode_a), str(mode_b), float(rng.uniform())))

            self.assertAlmostEqual(1.0, state.norm(), delta=1e-12)
            self.assertEqual({2}, state.photon_numbers())

    def test_binomial_coefficients(self):
        # |1,1> through a splitter of transmissivity eta has coincidence amplitude eta - (1 - eta)
        for eta in np.linspace(0.0, 1.0, 11):
            output = apply_beam_splitter(
                FockState.from_occupation(TWO_MODES, {"a": 1, "b": 1}), BeamSplitterSpec("a", "b", float(eta))
            )
            self.assertAlmostEqual(2 * eta - 1, output.amplitude_of({"a": 1, "b": 1}).real, places=12)
            self.assertAlmostEqual(math.sqrt(2) * math.sqrt(eta * (1 - eta)), abs(output.amplitude_of({"a": 2})))


if __name__ == "__main__":
    unittest.main()
