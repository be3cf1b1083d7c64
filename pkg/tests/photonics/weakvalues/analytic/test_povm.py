import unittest

import numpy as np
from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.analytic.povm import expectation_s1
from photonics.weakvalues.analytic.povm import expectation_s1_from_povm
from photonics.weakvalues.analytic.povm import Povm
from photonics.weakvalues.analytic.povm import povm_elements
from photonics.weakvalues.utils.errors import IndeterminateStrengthError


class PovmElementsTestCase(unittest.TestCase):
    def test_projective_at_full_strength(self):
        povm = povm_elements(MeterSetting.from_strength(1.0))
        self.assertTrue(np.allclose(np.diag([1, 0]), povm.pi_H))
        self.assertTrue(np.allclose(np.diag([0, 1]), povm.pi_V))

    def test_uninformative_at_zero_strength(self):
        povm = povm_elements(MeterSetting.from_strength(0.0))
        self.assertTrue(np.allclose(np.eye(2) / 2, povm.pi_H))
        self.assertTrue(np.allclose(np.eye(2) / 2, povm.pi_V))

    def test_probabilities(self):
        psi = Polarization.from_angle(42.0)
        p_h, p_v = povm_elements(MeterSetting.from_strength(0.5)).probabilities(psi)
        self.assertAlmostEqual(0.5 * (1 + 0.5 * expectation_s1(psi)), p_h)
        self.assertAlmostEqual(1.0, p_h + p_v)

    def test_validation(self):
        with self.assertRaises(ValueError):
            Povm(np.diag([1.5, 0.0]), np.diag([-0.5, 1.0]))
        with self.assertRaises(ValueError):
            Povm(np.diag([0.5, 0.5]), np.diag([0.25, 0.25]))
        with self.assertRaises(ValueError):
            Povm(np.eye(3), np.zeros((3, 3)))


class ExpectationFromPovmTestCase(unittest.TestCase):
    def test_recovers_s1_for_random_states(self):
        rng = np.random.default_rng(5)
        for K in (0.006, 0.1, 0.5, 1.0):
            meter = MeterSetting.from_strength(K)
            for _ in range(50):
                vector = rng.normal(size=2) + 1j * rng.normal(size=2)
                psi = Polarization.from_vector(vector, normalize=True)
                self.assertAlmostEqual(expectation_s1(psi), expectation_s1_from_povm(psi, meter), delta=1e-10)

    def test_zero_strength(self):
        with self.assertRaises(IndeterminateStrengthError):
            expectation_s1_from_povm(Polarization.from_angle(42.0), MeterSetting.from_strength(0.0))


if __name__ == "__main__":
    unittest.main()
