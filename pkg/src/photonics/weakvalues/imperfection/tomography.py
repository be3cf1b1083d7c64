"""
Linear-inversion state and process tomography over the product basis {H, V, D, R} ⊗ {H, V, D, R}.

The process matrix chi is expressed in the unnormalized two-qubit Pauli basis P_m = P_a ⊗ P_b (index m = 4a + b over
I, X, Y, Z), so that a channel acts as rho -> sum_mn chi[m, n] P_m rho P_n^dagger.  The identity channel has a single
unit entry at (II, II); a heralded process has trace equal to its success probability.
"""
from __future__ import annotations

import csv
import functools
import itertools
import logging
from dataclasses import dataclass
from typing import IO
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
import scipy.linalg
from more_itertools import interleave
from photonics.weakvalues.analytic.polarization import D
from photonics.weakvalues.analytic.polarization import H
from photonics.weakvalues.analytic.polarization import R
from photonics.weakvalues.analytic.polarization import V
from photonics.weakvalues.counting.export import atomic_output
from photonics.weakvalues.imperfection.channel import TwoQubitChannel
from photonics.weakvalues.utils.errors import TomographyError
from photonics.weakvalues.utils.linalg import projector
from photonics.weakvalues.utils.linalg import two_qubit_pauli_basis
from photonics.weakvalues.utils.linalg import two_qubit_pauli_labels
from photonics.weakvalues.utils.misc import format_real

log = logging.getLogger(__name__)

TOMOGRAPHY_STATES = {"H": H, "V": V, "D": D, "R": R}

# systems worse conditioned than this cannot be inverted reliably
MAX_CONDITION_NUMBER = 1e10
PSD_CLIP_WARNING_THRESHOLD = 1e-8


def product_kets() -> List[Tuple[str, np.ndarray]]:
    """The 16 product states, labelled by signal then meter polarization, e.g. "HD"."""
    return [
        (a + b, np.kron(TOMOGRAPHY_STATES[a].vector, TOMOGRAPHY_STATES[b].vector))
        for a, b in itertools.product(TOMOGRAPHY_STATES, repeat=2)
    ]


def product_projectors() -> List[np.ndarray]:
    return [projector(ket) for _, ket in product_kets()]


def _check_conditioning(system: np.ndarray, description: str):
    condition = np.linalg.cond(system)
    if not np.isfinite(condition) or condition > MAX_CONDITION_NUMBER:
        raise TomographyError(f"{description} is singular or ill-conditioned (condition number {condition:.3g})")


def state_tomography(probabilities: Sequence[float], projectors: Optional[Sequence[np.ndarray]] = None) -> np.ndarray:
    """
    Reconstruct a (possibly unnormalized) two-qubit density operator from the expectation values of 16 projectors, by
    solving tr(E_m rho) = p_m.
    """
    projectors = list(projectors) if projectors is not None else product_projectors()
    probabilities = np.asarray(probabilities, dtype=float)
    if len(projectors) != 16 or probabilities.shape != (16,):
        raise ValueError(
            f"State tomography needs 16 projectors and 16 values (got {len(projectors)}, {probabilities.shape})"
        )

    # tr(E rho) = vec(E^T) . vec(rho) for row-major vectorization
    system = np.array([e.T.reshape(-1) for e in projectors], dtype=complex)
    _check_conditioning(system, "State tomography measurement set")

    rho = np.linalg.solve(system, probabilities.astype(complex)).reshape(4, 4)
    return (rho + rho.conj().T) / 2


@functools.lru_cache(maxsize=1)
def _process_system() -> Tuple[Tuple[np.ndarray, np.ndarray], Tuple[np.ndarray, ...]]:
    """LU factorization of the map chi -> (vec(sum_mn chi_mn P_m rho_k P_n^dagger))_k, plus the input states rho_k."""
    paulis = np.array(two_qubit_pauli_basis())
    inputs = tuple(product_projectors())

    blocks = []
    for rho in inputs:
        # terms[m, n, i, l] = (P_m rho P_n^dagger)[i, l]
        terms = np.einsum("mij,jk,nlk->mnil", paulis, rho, paulis.conj())
        blocks.append(terms.transpose(2, 3, 0, 1).reshape(16, 256))
    system = np.vstack(blocks)
    _check_conditioning(system, "Process tomography input set")
    return scipy.linalg.lu_factor(system), inputs


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (16, 16):
            raise ValueError(f"Two-qubit chi matrix must be 16x16 (got shape {matrix.shape})")
        object.__setattr__(self, "matrix", matrix)

    @property
    def labels(self) -> List[str]:
        return two_qubit_pauli_labels()

    @staticmethod
    def from_kraus(kraus: Sequence[np.ndarray]) -> ChiMatrix:
        """Exact chi of an operator-sum map, expanding each Kraus operator as sum_m c_m P_m with c_m = tr(P_m K) / 4."""
        paulis = np.array(two_qubit_pauli_basis())
        coefficients = np.array([np.einsum("mij,ji->m", paulis.conj().transpose(0, 2, 1), k) / 4 for k in kraus])
        if len(coefficients) == 0:
            return ChiMatrix(np.zeros((16, 16), dtype=complex))
        return ChiMatrix(coefficients.T @ coefficients.conj())

    def entry(self, row: str, column: str) -> complex:
        labels = self.labels
        return complex(self.matrix[labels.index(row), labels.index(column)])

    def apply(self, rho: np.ndarray) -> np.ndarray:
        paulis = np.array(two_qubit_pauli_basis())
        return np.einsum("mn,mij,jk,nlk->il", self.matrix, paulis, np.asarray(rho, dtype=complex), paulis.conj())

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=atol, rtol=0))

    def eigenvalues(self) -> np.ndarray:
        return scipy.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)

    def rank(self, tol: float = 1e-8) -> int:
        return int(np.sum(self.eigenvalues() > tol))

    def project_to_psd(self) -> ChiMatrix:
        """Clip negative eigenvalues and rescale to the original trace."""
        hermitian = (self.matrix + self.matrix.conj().T) / 2
        eigenvalues, eigenvectors = scipy.linalg.eigh(hermitian)
        if eigenvalues.min() < -PSD_CLIP_WARNING_THRESHOLD:
            log.warning(f"PSD projection clipped chi eigenvalue {eigenvalues.min():.3e}")

        clipped = np.clip(eigenvalues, 0.0, None)
        if clipped.sum() > 0:
            clipped *= max(self.trace(), 0.0) / clipped.sum()
        return ChiMatrix((eigenvectors * clipped) @ eigenvectors.conj().T)

    def csv_rows(self) -> List[List[str]]:
        header = [f"{label}.{part}" for label in self.labels for part in ("re", "im")]
        rows = [header]
        for row in self.matrix:
            rows.append(list(interleave((format_real(x.real) for x in row), (format_real(x.imag) for x in row))))
        return rows

    def write_csv(self, stream: IO[str]):
        """Row-major, with the real and imaginary part of each entry in adjacent columns."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerows(self.csv_rows())

    def to_csv(self, path: str):
        with atomic_output(path) as outfile:
            self.write_csv(outfile)


def process_tomography(channel: TwoQubitChannel, project_psd: bool = False) -> ChiMatrix:
    """
    Reconstruct chi by linear inversion.  Each of the 16 product inputs is sent through the channel, its output is
    reconstructed by state tomography from the 16 product-projector statistics, and the stacked outputs are inverted.
    """
    lu, inputs = _process_system()
    projectors = product_projectors()

    outputs = []
    for rho in inputs:
        produced = channel.apply(rho)
        statistics = [float(np.trace(e @ produced).real) for e in projectors]
        outputs.append(state_tomography(statistics, projectors).reshape(-1))

    chi = ChiMatrix(scipy.linalg.lu_solve(lu, np.concatenate(outputs)).reshape(16, 16))
    log.debug(f"Reconstructed chi with trace {chi.trace():.6g} and rank {chi.rank()}")
    return chi.project_to_psd() if project_psd else chi
