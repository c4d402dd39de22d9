"""State preparation, walk statistics and simulated detection.

Shot sampling uses numpy's PCG64 bit generator. A record is determined by
``(seed, stream)``: the generator is built from
``SeedSequence(seed, spawn_key=(stream,))`` and counts are drawn with
``Generator.multinomial``. Distinct streams give independent draws for
parallel runs.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .core import evolve, require_unitary
from .errors import DimensionError
from .multiport import ExitDistribution, grover_unitary


@dataclass(frozen=True)
class ShotRecord:
    shots: int
    counts: tuple[int, ...]
    seed: int
    stream: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["port", "count"])
        for port, c in enumerate(self.counts):
            w.writerow([port, c])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {"shots": self.shots, "counts": list(self.counts), "seed": self.seed, "stream": self.stream}


@dataclass(frozen=True)
class WState:
    """Single-excitation W-state; ``amplitudes[i]`` multiplies ``|0..1_i..0>``."""
    n: int
    amplitudes: np.ndarray


def prepare_position(m: int, N: int) -> np.ndarray:
    if not 0 <= m < N:
        raise DimensionError(f"site {m} out of range for N = {N}")
    psi = np.zeros(N, dtype=complex)
    psi[m] = 1.0
    return psi


def w_state(n: int) -> WState:
    if n < 2:
        raise ValueError("a W-state needs at least two modes")
    return WState(n, np.full(n, 1 / np.sqrt(n), dtype=complex))


def transition_amplitudes(U, psi0, steps: int) -> np.ndarray:
    """Complex output amplitudes after ``steps`` passes (homodyne-level readout)."""
    return evolve(U, psi0, steps)


def walk_distribution(U, psi0, steps: int) -> ExitDistribution:
    psi = evolve(U, psi0, steps)
    p = np.abs(psi) ** 2
    return ExitDistribution(None, p / p.sum())


def sample_shots(dist, shots: int, seed: int, stream: int = 0) -> ShotRecord:
    """Detector counts for ``shots`` single photons drawn from ``dist``."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    p = np.asarray(dist.probabilities if isinstance(dist, ExitDistribution) else dist, dtype=float)
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))
    counts = rng.multinomial(shots, p)
    return ShotRecord(int(shots), tuple(int(c) for c in counts), int(seed), int(stream))


def compact_evolve(psi0, steps: int, left=None, right=None) -> np.ndarray:
    """Walk between two facing three-ports.

    The photon bounces between the right and left multiports, changing
    direction every step; the three connecting lines carry the state. The
    first pass hits the right multiport.
    """
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (3,):
        raise DimensionError("compact_evolve works on three lines")
    U_right = require_unitary(grover_unitary(3) if right is None else right)
    U_left = require_unitary(grover_unitary(3) if left is None else left)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    moving_right = True
    for _ in range(steps):
        psi = (U_right if moving_right else U_left) @ psi
        moving_right = not moving_right
    return psi


def distribution_json(dist: ExitDistribution) -> str:
    return json.dumps(dist.as_dict(), indent=2) + "\n"
