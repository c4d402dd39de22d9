"""Closed-form multiport unitaries and their exit statistics.

Ports are zero-based integers. The letters A, B, C used for the three-port
are accepted as aliases for 0, 1, 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DEFAULT_TOL, phase_align, require_unitary, unitary_eig
from .errors import DimensionError

PORT_ALIASES = {"A": 0, "B": 1, "C": 2}


class MultiportKind(str, Enum):
    GROVER = "grover"
    STRICT_THREE = "strict_three"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MultiportSpec:
    n: int
    kind: MultiportKind = MultiportKind.GROVER
    vertex_phases: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MultiportKind(self.kind))
        if self.n < 2:
            raise ValueError("a multiport needs at least two ports")
        if self.kind is MultiportKind.STRICT_THREE and self.n != 3:
            raise ValueError("strict_three requires n = 3")
        if self.vertex_phases is not None:
            phases = tuple(float(p) for p in self.vertex_phases)
            if len(phases) != self.n or not all(np.isfinite(phases)):
                raise ValueError(f"need {self.n} finite vertex phases")
            object.__setattr__(self, "vertex_phases", phases)


@dataclass(frozen=True)
class ExitDistribution:
    input_port: int | None
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probabilities", p)

    def as_dict(self) -> dict:
        return {"input_port": self.input_port, "probabilities": self.probabilities.tolist()}


def resolve_port(port, n: int) -> int:
    if isinstance(port, str):
        key = port.strip().upper()
        if key in PORT_ALIASES:
            idx = PORT_ALIASES[key]
        elif key.isdigit():
            idx = int(key)
        else:
            raise DimensionError(f"unknown port label {port!r}")
    else:
        idx = int(port)
    if not 0 <= idx < n:
        raise DimensionError(f"port {port!r} is not valid for a {n}-port")
    return idx


def grover_unitary(n: int) -> np.ndarray:
    """n-dimensional Grover coin realised by an unbiased n-port.

    Entries are ``-i(n-2)/n`` on the diagonal and ``2i/n`` elsewhere. ``n = 2``
    is admitted: it gives a pure swap (times ``i``), a valid if trivial coin.
    """
    if n < 2:
        raise ValueError("grover_unitary needs n >= 2")
    M = np.full((n, n), -2.0, dtype=complex)
    np.fill_diagonal(M, n - 2)
    return (-1j / n) * M


def strict_three_port() -> np.ndarray:
    """Three-port with all exit probabilities equal to 1/3."""
    w = np.exp(-2j * np.pi / 3)
    M = np.ones((3, 3), dtype=complex)
    np.fill_diagonal(M, w)
    return np.exp(2j * np.pi / 3) / np.sqrt(3) * M


def multiport_unitary(spec: MultiportSpec) -> np.ndarray:
    """Unitary for a MultiportSpec.

    ``custom`` three-ports are solved from their internal beam-splitter
    construction with the calibrated conventions.
    """
    if spec.kind is MultiportKind.GROVER:
        return grover_unitary(spec.n)
    if spec.kind is MultiportKind.STRICT_THREE:
        return strict_three_port()
    if spec.n == 3 and spec.vertex_phases is not None:
        from .scattering import build_unbiased_three_port, effective_smatrix

        return effective_smatrix(build_unbiased_three_port(spec.vertex_phases))
    raise ValueError(f"no unitary is defined for a custom {spec.n}-port")


def exit_probabilities(U, port) -> ExitDistribution:
    """Exit probabilities for a photon entering at ``port`` (a column of U)."""
    U = require_unitary(U)
    p = resolve_port(port, U.shape[0])
    return ExitDistribution(p, np.abs(U[:, p]) ** 2)


def _eigenspace_basis(Zc: np.ndarray) -> list[np.ndarray]:
    # Deterministic orthonormal basis: Gram-Schmidt on projected unit vectors.
    dim, d = Zc.shape
    P = Zc @ Zc.conj().T
    basis: list[np.ndarray] = []
    for i in range(dim):
        v = P[:, i].copy()
        for b in basis:
            v -= np.vdot(b, v) * b
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            basis.append(v / nrm)
        if len(basis) == d:
            break
    return [phase_align(b) for b in basis]


def eigensystem(U, tol: float = DEFAULT_TOL, cluster_tol: float = 1e-8):
    """Orthonormal eigen-system of a unitary.

    Returns a list of ``(eigenvalue, eigenvector)`` sorted by eigenphase in
    ``(-pi, pi]``. Degenerate eigenspaces get a deterministic orthonormal
    basis; ties are ordered lexicographically on the phase-aligned vectors.
    """
    lam, Z = unitary_eig(U, tol)
    theta = np.angle(lam)
    theta = np.where(theta <= -np.pi + 1e-12, np.pi, theta)
    order = np.argsort(theta, kind="stable")

    clusters: list[list[int]] = []
    for i in order:
        if clusters and abs(lam[i] - lam[clusters[-1][0]]) < cluster_tol:
            clusters[-1].append(int(i))
        else:
            clusters.append([int(i)])
    if len(clusters) > 1 and abs(lam[clusters[0][0]] - lam[clusters[-1][0]]) < cluster_tol:
        clusters[0] = clusters.pop() + clusters[0]

    out = []
    for idx in clusters:
        value = lam[idx].mean()
        value /= abs(value)
        vecs = _eigenspace_basis(Z[:, idx])
        vecs.sort(key=lambda v: tuple(np.round(np.column_stack([v.real, v.imag]).ravel(), 12)))
        out.extend((complex(value), v) for v in vecs)
    return out
