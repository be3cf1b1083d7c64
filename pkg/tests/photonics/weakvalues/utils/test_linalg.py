import unittest

import numpy as np
from photonics.weakvalues.utils.linalg import is_psd
from photonics.weakvalues.utils.linalg import random_density_matrix
from photonics.weakvalues.utils.linalg import random_ket
from photonics.weakvalues.utils.linalg import state_fidelity
from photonics.weakvalues.utils.linalg import two_qubit_pauli_basis
from photonics.weakvalues.utils.linalg import two_qubit_pauli_labels


class PauliBasisTestCase(unittest.TestCase):
    def test_basis_is_orthogonal(self):
        basis = two_qubit_pauli_basis()
        gram = np.array([[np.trace(a.conj().T @ b) for b in basis] for a in basis])
        self.assertTrue(np.allclose(4 * np.eye(16), gram))

    def test_labels(self):
        labels = two_qubit_pauli_labels()
        self.assertEqual("II", labels[0])
        self.assertEqual("XZ", labels[4 * 1 + 3])


class RandomStatesTestCase(unittest.TestCase):
    def test_random_ket_is_normalized(self):
        rng = np.random.default_rng(0)
        self.assertAlmostEqual(1.0, np.linalg.norm(random_ket(rng, dim=4)))
        self.assertTrue(np.all(random_ket(rng, real=True).imag == 0))

    def test_random_density_matrix(self):
        rho = random_density_matrix(np.random.default_rng(0))
        self.assertTrue(is_psd(rho))
        self.assertAlmostEqual(1.0, np.trace(rho).real)

    def test_fidelity(self):
        self.assertAlmostEqual(0.5, state_fidelity([1, 0], [np.sqrt(0.5), np.sqrt(0.5)]))
