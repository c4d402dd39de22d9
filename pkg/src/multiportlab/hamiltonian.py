"""Hamiltonians built from multiport transition matrices.

Covers the three-site ring driven by the Grover three-port, the
time-reversal doubling ``[[0, U^dagger], [U, 0]]`` and the beam-splitter
instance of that doubling. Sites are zero-based and taken mod N.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, require_unitary
from .errors import GridError


@dataclass(frozen=True)
class ReversedHamiltonian:
    """Doubled Hamiltonian; the first half of the basis is ingoing, the second outgoing."""
    matrix: np.ndarray
    half_dim: int

    @property
    def forward_block(self) -> np.ndarray:
        return self.matrix[self.half_dim:, :self.half_dim]

    @property
    def backward_block(self) -> np.ndarray:
        return self.matrix[:self.half_dim, self.half_dim:]


@dataclass(frozen=True)
class MomentumState:
    k: float
    N: int
    vector: np.ndarray


def three_point_hamiltonian() -> np.ndarray:
    """Hamiltonian of the three-site ring, assembled site by site.

    Each site carries a background ``pi/6`` and couples to its neighbour with
    ``-2 pi/6``; this equals ``i ln U`` for the Grover three-port.
    """
    N = 3
    H = np.zeros((N, N), dtype=complex)
    for m in range(N):
        H[m, m] += 1
        H[(m + 1) % N, m] += -2
        H[m, (m + 1) % N] += -2
    return np.pi / 6 * H


def three_point_dispersion(k: float) -> float:
    return np.pi / 6 * (1 - 4 * np.cos(k))


def reversible_double(U, tol: float = DEFAULT_TOL) -> ReversedHamiltonian:
    """Embed U and its time reverse in the Hermitian ``[[0, U^dagger], [U, 0]]``."""
    U = require_unitary(U, tol)
    d = U.shape[0]
    H = np.zeros((2 * d, 2 * d), dtype=complex)
    H[:d, d:] = U.conj().T
    H[d:, :d] = U
    return ReversedHamiltonian(H, d)


def doubled_evolution(H, T: float) -> np.ndarray:
    """``exp(-iHT) = I cos T - i H sin T``, valid when ``H @ H = I``."""
    H = np.asarray(H.matrix if isinstance(H, ReversedHamiltonian) else H, dtype=complex)
    return np.eye(H.shape[0]) * np.cos(T) - 1j * H * np.sin(T)


def beamsplitter_2() -> np.ndarray:
    return np.array([[1, 1j], [1j, 1]], dtype=complex) / np.sqrt(2)


def beamsplitter_4() -> np.ndarray:
    """Four-port splitter with every port usable for input or output."""
    return reversible_double(beamsplitter_2()).matrix


def momentum_state(k: float, N: int, grid_tol: float = 1e-9) -> MomentumState:
    """Plane wave ``e^{imk}/sqrt(N)`` over sites ``m = 0..N-1``.

    ``k`` must sit on the grid ``2*pi*n/N``; otherwise GridError.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    n = k * N / (2 * np.pi)
    if abs(n - round(n)) > grid_tol:
        raise GridError(f"k = {k!r} is not of the form 2*pi*n/{N}")
    k_grid = (2 * np.pi * round(n) / N) % (2 * np.pi)
    m = np.arange(N)
    return MomentumState(k_grid, N, np.exp(1j * m * k_grid) / np.sqrt(N))
