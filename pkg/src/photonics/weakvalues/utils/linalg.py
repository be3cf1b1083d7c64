"""Small dense helpers shared by the qubit-level layers."""
import itertools
from typing import List
from typing import Sequence

import numpy as np

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI_LABELS = ("I", "X", "Y", "Z")
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)


def two_qubit_pauli_basis() -> List[np.ndarray]:
    """The 16 operators P_a ⊗ P_b, ordered with index 4a + b over (I, X, Y, Z)."""
    return [np.kron(a, b) for a, b in itertools.product(PAULIS, repeat=2)]


def two_qubit_pauli_labels() -> List[str]:
    return [a + b for a, b in itertools.product(PAULI_LABELS, repeat=2)]


def projector(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex).reshape(-1)
    return np.outer(ket, ket.conj())


def is_hermitian(op: np.ndarray, atol: float = 1e-10) -> bool:
    return bool(np.allclose(op, op.conj().T, atol=atol))


def is_psd(op: np.ndarray, atol: float = 1e-10) -> bool:
    return is_hermitian(op, atol) and bool(np.linalg.eigvalsh((op + op.conj().T) / 2).min() >= -atol)


def random_ket(rng: np.random.Generator, dim: int = 2, real: bool = False) -> np.ndarray:
    """Haar-random pure state (or uniformly random real unit vector when real=True)."""
    vec = rng.normal(size=dim)
    if not real:
        vec = vec + 1j * rng.normal(size=dim)
    vec = np.asarray(vec, dtype=complex)
    return vec / np.linalg.norm(vec)


def random_density_matrix(rng: np.random.Generator, dim: int = 4, rank: int = 2) -> np.ndarray:
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def state_fidelity(a: Sequence[complex], b: Sequence[complex]) -> float:
    """|<a|b>|^2 for normalized kets."""
    return float(abs(np.vdot(np.asarray(a), np.asarray(b))) ** 2)
