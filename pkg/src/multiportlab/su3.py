"""Pauli and Gell-Mann expansions of 2x2 and 3x3 Hermitian matrices.

Coefficients are extracted with the trace inner product, using
``tr(L_i L_j) = 2 delta_ij`` (and the same for the Pauli matrices).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, require_hermitian
from .errors import DimensionError

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_GELL_MANN = (
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
    np.diag([1, 1, -2]) / np.sqrt(3),
)
# Lambda_7 in the tabulated form (+i in the (2,3) slot); not Hermitian.
_LAMBDA7_TABULATED = [[0, 0, 0], [0, 0, 1j], [0, 1j, 0]]

SEVEN_DIM_SUBSPACE = (0, 1, 2, 3, 6, 7, 8)  # I, L1, L2, L3, L6, L7, L8


def gell_mann(j: int, printed: bool = False) -> np.ndarray:
    """Gell-Mann matrix ``Lambda_j`` for ``j`` in 1..8.

    ``printed=True`` returns the tabulated ``Lambda_7``
    (``+i`` in both off-diagonal slots) instead of the Hermitian one.
    """
    if not 1 <= j <= 8:
        raise ValueError(f"Gell-Mann index must be in 1..8, got {j}")
    if printed and j == 7:
        return np.array(_LAMBDA7_TABULATED, dtype=complex)
    return np.array(_GELL_MANN[j - 1], dtype=complex)


def gell_mann_basis() -> list[np.ndarray]:
    return [gell_mann(j) for j in range(1, 9)]


@dataclass(frozen=True)
class PauliCoefficients:
    d0: float
    dx: float
    dy: float
    dz: float

    def vector(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dz])


@dataclass(frozen=True)
class GellMannCoefficients:
    d0: float
    d: tuple[float, ...]

    def __post_init__(self):
        d = tuple(float(x) for x in self.d)
        if len(d) != 8:
            raise ValueError("need eight Gell-Mann coefficients")
        object.__setattr__(self, "d", d)

    def as_array(self) -> np.ndarray:
        return np.array((self.d0,) + self.d)

    def as_dict(self) -> dict:
        out = {"d0": self.d0}
        out.update({f"d{j}": v for j, v in enumerate(self.d, start=1)})
        return out


def _shape_check(H, n):
    H = np.asarray(H, dtype=complex)
    if H.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix, got {H.shape}")
    return H


def su2_decompose(H, tol: float = DEFAULT_TOL) -> PauliCoefficients:
    H = require_hermitian(_shape_check(H, 2), tol)
    d = [np.trace(H @ s).real / 2 for s in SIGMA]
    return PauliCoefficients(np.trace(H).real / 2, *d)


def su2_reconstruct(c: PauliCoefficients) -> np.ndarray:
    return c.d0 * np.eye(2) + sum(x * s for x, s in zip(c.vector(), SIGMA))


def su3_decompose(H, tol: float = DEFAULT_TOL) -> GellMannCoefficients:
    H = require_hermitian(_shape_check(H, 3), tol)
    d = [np.trace(H @ L).real / 2 for L in gell_mann_basis()]
    return GellMannCoefficients(np.trace(H).real / 3, tuple(d))


def su3_reconstruct(c: GellMannCoefficients) -> np.ndarray:
    H = c.d0 * np.eye(3, dtype=complex)
    for x, L in zip(c.d, gell_mann_basis()):
        H = H + x * L
    return H


def tabulated_coefficients(k: float) -> GellMannCoefficients:
    """Tabulated expansion of the Bloch Hamiltonian in the Gell-Mann basis.

    Reproduced literally for comparison (with the Hermitian Lambda_7); it
    does not reconstruct :func:`multiportlab.chain.bloch_hamiltonian`.
    """
    s2 = np.sqrt(2)
    d0 = (1 - 4 * s2 / 3 * np.cos(k)) / 3
    d = np.zeros(8)
    d[0] = d[5] = -s2 * (1 + np.cos(k)) / 3   # Lambda_1, Lambda_6
    d[1] = s2 * np.sin(k) / 3                  # Lambda_2
    d[6] = -s2 * np.sin(k) / 3                 # Lambda_7
    d[2] = -s2 / 3                             # Lambda_3
    d[7] = s2 / (3 * np.sqrt(3))               # Lambda_8
    return GellMannCoefficients(d0, tuple(d))


def bloch_coefficients(samples: int) -> list[dict]:
    """Gell-Mann coefficients of the Bloch Hamiltonian on ``samples`` k-points."""
    from .chain import bloch_hamiltonian, k_samples

    out = []
    for k in k_samples(samples):
        rec = {"k": float(k)}
        rec.update(su3_decompose(bloch_hamiltonian(k)).as_dict())
        out.append(rec)
    return out


def coefficients_json(records: list[dict]) -> str:
    return json.dumps(records, indent=2) + "\n"
