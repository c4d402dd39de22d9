"""Complex linear-algebra contracts used throughout the package.

Matrices and states are plain ``numpy`` arrays (complex128). The functions
here validate them (unitarity, Hermiticity, shape) and provide the discrete
time machinery: ``U**n`` evolution, the principal Hamiltonian ``H = i ln U``
and its inverse ``exp(-iHT)``.
"""
from __future__ import annotations

import numpy as np
from scipy import linalg

from .errors import BranchCutError, DimensionError, NotHermitianError, NotUnitaryError

DEFAULT_TOL = 1e-10
BRANCH_TOL = 1e-12


def as_square(M) -> np.ndarray:
    """Return ``M`` as a complex square array, or raise DimensionError."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError("matrix has non-finite entries")
    return A


def unitarity_residual(M) -> float:
    A = as_square(M)
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0])), initial=0.0))


def hermiticity_residual(M) -> float:
    A = as_square(M)
    return float(np.max(np.abs(A - A.conj().T), initial=0.0))


def check_unitary(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|M^dagger M - I| <= tol``."""
    return unitarity_residual(M) <= tol


def check_hermitian(M, tol: float = DEFAULT_TOL) -> bool:
    return hermiticity_residual(M) <= tol


def require_unitary(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    A = as_square(M)
    res = unitarity_residual(A)
    if res > tol:
        raise NotUnitaryError(f"matrix is not unitary (residual {res:.3e} > {tol:.1e})")
    return A


def require_hermitian(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    A = as_square(M)
    res = hermiticity_residual(A)
    if res > tol:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e} > {tol:.1e})")
    return A


def unitary_eig(U, tol: float = DEFAULT_TOL):
    """Eigen-decomposition of a unitary via the complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the Schur vectors are
    an orthonormal eigenbasis even inside degenerate eigenspaces (where
    ``numpy.linalg.eig`` may return a non-orthogonal basis).

    Returns:
        (eigenvalues, Z) with ``U = Z diag(eigenvalues) Z^dagger``.
    """
    U = require_unitary(U, tol)
    T, Z = linalg.schur(U, output="complex")
    return np.diag(T).copy(), Z


def principal_log_hamiltonian(U, time_step: float = 1.0, tol: float = DEFAULT_TOL,
                              allow_branch_cut: bool = False) -> np.ndarray:
    """Hamiltonian ``H = (i/T) ln U`` on the principal branch.

    Eigenphases are taken in ``(-pi, pi]``. An eigenvalue within ``1e-12``
    of ``-1`` sits on the cut (``-pi`` and ``+pi`` are equally close) and
    raises :class:`BranchCutError` unless ``allow_branch_cut`` is set, in
    which case its phase is taken as ``+pi``.
    """
    lam, Z = unitary_eig(U, tol)
    theta = np.angle(lam)
    on_cut = np.abs(lam + 1) <= BRANCH_TOL
    if np.any(on_cut):
        if not allow_branch_cut:
            raise BranchCutError("eigenvalue -1 is on the branch cut; pass allow_branch_cut=True")
        theta = np.where(on_cut, np.pi, theta)
    # U = Z e^{i theta} Z^dagger = e^{-iHT}  =>  H = -Z theta Z^dagger / T
    H = -(Z * theta) @ Z.conj().T / time_step
    return (H + H.conj().T) / 2


def exp_evolution(H, T: float = 1.0, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Evolution operator ``exp(-i H T)`` for a Hermitian ``H``."""
    H = require_hermitian(H, tol)
    E, V = np.linalg.eigh((H + H.conj().T) / 2)
    return (V * np.exp(-1j * E * T)) @ V.conj().T


def evolve(U, psi0, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """State after ``n`` discrete time steps, ``U**n @ psi0``."""
    U = require_unitary(U, tol)
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (U.shape[0],):
        raise DimensionError(f"state of shape {psi.shape} does not match {U.shape}")
    if n < 0:
        raise ValueError("number of steps must be non-negative")
    return np.linalg.matrix_power(U, int(n)) @ psi


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm


def phase_align(x) -> np.ndarray:
    """Multiply by a global phase so the largest-magnitude entry is real positive.

    Ties in magnitude (within 1e-12) go to the lowest index.
    """
    a = np.asarray(x, dtype=complex)
    flat = a.ravel()
    mags = np.abs(flat)
    if mags.size == 0 or mags.max() == 0:
        return a.copy()
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return a * (np.conj(flat[k]) / mags[k])


def equal_up_to_phase(A, B, tol: float = DEFAULT_TOL) -> bool:
    """Compare two arrays after removing a global phase from each."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        return False
    return bool(np.max(np.abs(phase_align(A) - phase_align(B)), initial=0.0) <= tol)


def global_phase(A, B) -> complex:
    """The unit phase ``c`` minimising ``|A - c B|`` (least squares)."""
    A = np.asarray(A, dtype=complex).ravel()
    B = np.asarray(B, dtype=complex).ravel()
    z = np.vdot(B, A)
    return z / abs(z) if abs(z) > 0 else 1.0 + 0j


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
