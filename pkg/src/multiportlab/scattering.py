"""Steady-state coherent solution of networks of lossless scatterers.

A network is a set of nodes (local S-matrices) whose ports are either wired
pairwise by internal edges or exposed as external ports. Each undirected
edge carries two directed modes, one per travel direction; an edge phase
multiplies the amplitude in both directions. Multiports are treated as
point-like: internal distances enter only through these phases.

The effective S-matrix sums every internal path coherently::

    S_eff = S_EE + S_EI (I - S_II)^-1 S_IE

where ``S_II`` already includes the edge propagation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, equal_up_to_phase, require_unitary
from .errors import ResonanceError, ScatterValidationError

Port = tuple[str, int]

# 50:50 splitter, transmission 1/sqrt(2), reflection i/sqrt(2)
BS_T = 1 / np.sqrt(2)
BS_R = 1j / np.sqrt(2)


@dataclass(frozen=True)
class ScatterNode:
    id: str
    smatrix: np.ndarray
    ports: tuple[int, ...] = ()

    def __post_init__(self):
        S = require_unitary(self.smatrix, DEFAULT_TOL)
        object.__setattr__(self, "smatrix", S)
        if not self.ports:
            object.__setattr__(self, "ports", tuple(range(S.shape[0])))
        if len(self.ports) != S.shape[0]:
            raise ScatterValidationError(f"node {self.id}: {len(self.ports)} ports for a {S.shape[0]}x{S.shape[0]} matrix")


@dataclass(frozen=True)
class ScatterNetwork:
    nodes: tuple[ScatterNode, ...]
    internal_edges: tuple[tuple[Port, Port, float], ...]
    external_ports: tuple[Port, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "internal_edges",
                           tuple((tuple(a), tuple(b), float(ph)) for a, b, ph in self.internal_edges))
        object.__setattr__(self, "external_ports", tuple(tuple(p) for p in self.external_ports))
        self._validate()

    def _validate(self):
        index = {}
        for node in self.nodes:
            for k, p in enumerate(node.ports):
                if (node.id, p) in index:
                    raise ScatterValidationError(f"duplicate port label {(node.id, p)}")
                index[(node.id, p)] = (node, k)
        used: dict[Port, str] = {}

        def claim(port, what):
            if port not in index:
                raise ScatterValidationError(f"{what} references unknown port {port}")
            if port in used:
                raise ScatterValidationError(f"port {port} used by both {used[port]} and {what}")
            used[port] = what

        for a, b, ph in self.internal_edges:
            if not np.isfinite(ph):
                raise ScatterValidationError(f"edge {a}-{b} has a non-finite phase")
            claim(a, f"edge {a}-{b}")
            claim(b, f"edge {a}-{b}")
        for p in self.external_ports:
            claim(p, "external port")
        dangling = sorted(set(index) - set(used))
        if dangling:
            raise ScatterValidationError(f"dangling ports: {dangling}")
        object.__setattr__(self, "_index", index)

    def all_ports(self) -> list[Port]:
        return [(node.id, p) for node in self.nodes for p in node.ports]


def scattering_blocks(net: ScatterNetwork):
    """Blocks ``(S_EE, S_EI, S_IE, S_II)`` over external and internal modes.

    Internal modes are indexed by the node port they flow *into*; the edge
    phase is folded into ``S_IE`` and ``S_II``.
    """
    ports = net.all_ports()
    pos = {p: i for i, p in enumerate(ports)}
    dim = len(ports)
    S = np.zeros((dim, dim), dtype=complex)
    offset = 0
    for node in net.nodes:
        n = node.smatrix.shape[0]
        S[offset:offset + n, offset:offset + n] = node.smatrix
        offset += n

    ext = [pos[p] for p in net.external_ports]
    internal = [p for a, b, _ in net.internal_edges for p in (a, b)]
    internal_idx = [pos[p] for p in internal]
    # C maps outgoing amplitudes at internal ports onto incoming ones
    C = np.zeros((len(internal), len(internal)), dtype=complex)
    local = {p: i for i, p in enumerate(internal)}
    for a, b, ph in net.internal_edges:
        C[local[b], local[a]] = np.exp(1j * ph)
        C[local[a], local[b]] = np.exp(1j * ph)

    S_EE = S[np.ix_(ext, ext)]
    S_EI = S[np.ix_(ext, internal_idx)]
    S_IE = C @ S[np.ix_(internal_idx, ext)]
    S_II = C @ S[np.ix_(internal_idx, internal_idx)]
    return S_EE, S_EI, S_IE, S_II


def effective_smatrix(net: ScatterNetwork, cond_tol: float = 1e-10) -> np.ndarray:
    """External S-matrix of a network, rows/columns ordered as ``external_ports``."""
    S_EE, S_EI, S_IE, S_II = scattering_blocks(net)
    if S_II.size == 0:
        return S_EE.copy()
    M = np.eye(S_II.shape[0]) - S_II
    W, s, Vh = np.linalg.svd(M)
    dark = s < cond_tol * max(s[0], 1.0)
    if not dark.any():
        return S_EE + S_EI @ np.linalg.solve(M, S_IE)
    # Resonant loops are harmless only if no light can enter or leave them.
    leak_in = np.max(np.abs(W[:, dark].conj().T @ S_IE), initial=0.0)
    leak_out = np.max(np.abs(S_EI @ Vh[dark].conj().T), initial=0.0)
    if max(leak_in, leak_out) > 1e-9:
        raise ResonanceError("internal feedback is resonant: (I - S_II) is singular on a coupled mode")
    s_inv = np.where(dark, 0.0, 1.0 / np.where(dark, 1.0, s))
    X = Vh.conj().T @ (s_inv[:, None] * (W.conj().T @ S_IE))
    return S_EE + S_EI @ X


def path_sum_smatrix(net: ScatterNetwork, terms: int) -> np.ndarray:
    """Truncated path sum ``S_EE + S_EI (sum_{p<=terms} S_II^p) S_IE``."""
    S_EE, S_EI, S_IE, S_II = scattering_blocks(net)
    acc = S_IE.copy()
    term = S_IE.copy()
    for _ in range(terms):
        term = S_II @ term
        acc += term
    return S_EE + S_EI @ acc


def internal_spectral_radius(net: ScatterNetwork) -> float:
    S_II = scattering_blocks(net)[3]
    return float(np.max(np.abs(np.linalg.eigvals(S_II)), initial=0.0))


# --- the unbiased three-port built from splitters and vertex units ------------

@dataclass(frozen=True)
class CalibrationProfile:
    """Conventions the device description leaves open.

    Attributes:
        ring_phase: propagation phase between neighbouring splitters; the
            splitter-to-mirror leg carries half of it each way.
        mirror_sign: sign of the bare mirror reflection.
        vertex_passes: how many times light crosses the vertex phase shifter
            on a round trip (1 or 2).
    """
    name: str
    ring_phase: float
    mirror_sign: int
    vertex_passes: int

    def vertex_reflection(self, phi: float) -> complex:
        return self.mirror_sign * np.exp(1j * self.vertex_passes * phi)


# Frozen by calibration against the Grover three-port at phi = -3*pi/4.
CALIBRATED_PROFILE = CalibrationProfile("calibrated", ring_phase=0.0, mirror_sign=-1, vertex_passes=2)
# Single-pass convention: equal exit probabilities at phi = pi/6, but no
# Grover coin at phi = -3*pi/4.
SINGLE_PASS_PROFILE = CalibrationProfile("single-pass", ring_phase=0.0, mirror_sign=1, vertex_passes=1)

PROFILES = {p.name: p for p in (CALIBRATED_PROFILE, SINGLE_PASS_PROFILE)}

# splitter port roles
EXT, VERTEX, CW, CCW = 0, 1, 2, 3


def beam_splitter_node(node_id: str) -> ScatterNode:
    """Four-port splitter: {external, vertex} on one side, {cw, ccw} on the other."""
    t, r = BS_T, BS_R
    S = np.array([
        [0, 0, t, r],
        [0, 0, r, t],
        [t, r, 0, 0],
        [r, t, 0, 0],
    ], dtype=complex)
    return ScatterNode(node_id, S, (EXT, VERTEX, CW, CCW))


def vertex_unit_node(node_id: str, phi: float, profile: CalibrationProfile) -> ScatterNode:
    return ScatterNode(node_id, np.array([[profile.vertex_reflection(phi)]]), (0,))


def build_unbiased_three_port(phases, conventions: CalibrationProfile = CALIBRATED_PROFILE,
                              n: int | None = None) -> ScatterNetwork:
    """Ring of splitters, each terminated by a mirror/phase-shifter vertex unit.

    Works for any number of vertices (``len(phases)``); the three-vertex ring
    is the unbiased three-port. External ports are ``("bs<i>", 0)`` in vertex
    order.
    """
    phases = [float(p) for p in phases]
    n = len(phases) if n is None else n
    if n < 2 or len(phases) != n:
        raise ValueError("need one vertex phase per port and at least two ports")
    nodes, edges = [], []
    for i, phi in enumerate(phases):
        nodes.append(beam_splitter_node(f"bs{i}"))
        nodes.append(vertex_unit_node(f"v{i}", phi, conventions))
        edges.append(((f"bs{i}", VERTEX), (f"v{i}", 0), conventions.ring_phase / 2))
        edges.append(((f"bs{i}", CW), (f"bs{(i + 1) % n}", CCW), conventions.ring_phase))
    external = [(f"bs{i}", EXT) for i in range(n)]
    return ScatterNetwork(tuple(nodes), tuple(edges), tuple(external))


def calibrate(target: np.ndarray, phi: float = -3 * np.pi / 4, tol: float = 1e-8,
              ring_phases=(0.0, np.pi / 2, np.pi, 3 * np.pi / 2), signs=(1, -1), passes=(1, 2)):
    """Every convention in the sweep whose ring reproduces ``target`` up to global phase."""
    hits = []
    for th, s, k in itertools.product(ring_phases, signs, passes):
        prof = CalibrationProfile(f"theta={th:.4f},sign={s:+d},passes={k}", th, s, k)
        try:
            S = effective_smatrix(build_unbiased_three_port([phi] * target.shape[0], prof))
        except ResonanceError:
            continue
        if equal_up_to_phase(S, target, tol):
            hits.append(prof)
    return hits
