"""Compile a network description into a one-step evolution operator.

The state space has one amplitude per directed mode: each two-way edge
gives two modes, a one-way edge one, and each terminal one. A mode is
labelled ``(node, port, slot)`` by the port it leaves from (``out``), or
for stubs by the port it serves (``in`` / ``io``). Modes are ordered
lexicographically by label.

One time step sends every mode into the port it reaches, scatters it with
that node's unitary and places the result on the modes leaving the node,
multiplied by the edge phase. Output-only stubs close onto the input-only
stubs (k-th to k-th in label order) so the step operator stays unitary;
:func:`run_walk` absorbs stub light at detectors before it can recirculate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..multiport import multiport_unitary
from .errors import CompileError
from .model import NetworkSpec


@dataclass(frozen=True)
class Mode:
    label: tuple[str, int, str]
    kind: str                      # "edge" or "terminal"
    target: tuple[str, int] | None
    phase: float = 0.0
    role: str | None = None
    reflective: bool = False


@dataclass(frozen=True)
class EdgeBasis:
    modes: tuple[Mode, ...]

    @property
    def labels(self) -> list[tuple[str, int, str]]:
        return [m.label for m in self.modes]

    def index(self, label) -> int:
        return self.labels.index(tuple(label))

    def __len__(self) -> int:
        return len(self.modes)

    def terminals(self, *roles: str) -> list[int]:
        return [i for i, m in enumerate(self.modes) if m.kind == "terminal" and (not roles or m.role in roles)]


def edge_basis(spec: NetworkSpec) -> EdgeBasis:
    modes = []
    for e in spec.edges:
        modes.append(Mode((*e.a, "out"), "edge", e.b, e.phase))
        if not e.directed:
            modes.append(Mode((*e.b, "out"), "edge", e.a, e.phase))
    for t in spec.terminals:
        slot = {"io": "io", "in": "in", "out": "out"}[t.role]
        target = None if t.role == "out" else (t.node, t.port)
        modes.append(Mode((t.node, t.port, slot), "terminal", target, 0.0, t.role, t.reflective))
    modes.sort(key=lambda m: m.label)
    return EdgeBasis(tuple(modes))


def compile_evolution(spec: NetworkSpec) -> tuple[np.ndarray, EdgeBasis]:
    """Unitary single-step operator over the directed-mode basis."""
    basis = edge_basis(spec)
    out_owner = {}
    for i, m in enumerate(basis.modes):
        if m.label[2] in ("out", "io"):
            out_owner[m.label[:2]] = i

    unitaries = {}
    for nd in spec.nodes:
        try:
            unitaries[nd.id] = multiport_unitary(nd.spec)
        except ValueError as exc:
            raise CompileError(f"node {nd.id!r}: {exc}") from None

    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, m in enumerate(basis.modes):
        if m.target is None:
            continue
        node, p = m.target
        U = unitaries[node]
        for q in range(U.shape[0]):
            i = out_owner[(node, q)]
            M[i, j] += U[q, p] * np.exp(1j * basis.modes[i].phase)

    ins = basis.terminals("in")
    outs = basis.terminals("out")
    for i_in, j_out in zip(ins, outs):
        M[i_in, j_out] = 1.0
    return M, basis


@dataclass
class WalkResult:
    state: np.ndarray
    absorbed: np.ndarray           # probability collected per mode (non-zero on stubs only)
    basis: EdgeBasis

    def by_port(self, n_ports: int | None = None) -> np.ndarray:
        """In-flight plus absorbed probability summed by port index."""
        p = np.abs(self.state) ** 2 + self.absorbed
        ports = [m.label[1] for m in self.basis.modes]
        n = max(ports) + 1 if n_ports is None else n_ports
        out = np.zeros(n)
        for port, x in zip(ports, p):
            out[port] += x
        return out


def run_walk(M: np.ndarray, basis: EdgeBasis, psi0, steps: int, absorbing: bool = True) -> WalkResult:
    """Step a state ``steps`` times; detectors absorb light reaching stubs."""
    psi = np.asarray(psi0, dtype=complex).copy()
    absorbed = np.zeros(len(basis))
    sinks = [i for i, m in enumerate(basis.modes)
             if m.kind == "terminal" and m.role in ("io", "out") and not m.reflective] if absorbing else []
    for _ in range(steps):
        psi = M @ psi
        if sinks:
            absorbed[sinks] += np.abs(psi[sinks]) ** 2
            psi[sinks] = 0.0
    return WalkResult(psi, absorbed, basis)


def injection_state(basis: EdgeBasis, terminal: int) -> np.ndarray:
    """Unit amplitude on the ``terminal``-th input stub (``in`` or ``io``, label order)."""
    inputs = basis.terminals("in", "io")
    if not 0 <= terminal < len(inputs):
        raise IndexError(f"network has {len(inputs)} input stubs")
    psi = np.zeros(len(basis), dtype=complex)
    psi[inputs[terminal]] = 1.0
    return psi


def lattice_chain_operator(M: np.ndarray, basis: EdgeBasis, sites: int):
    """Re-index a compiled ``fig4_lattice`` step operator into the chain basis.

    The step operator times ``i`` is the chain's unsymmetrised term list;
    the result is Hermitised the same way as
    :func:`multiportlab.chain.build_full_chain`.
    """
    from ..chain import ChainOperator, chain_index
    from ..core import hermiticity_residual
    from .templates import lattice_chain_label

    idx = []
    try:
        for label in basis.labels:
            lab = lattice_chain_label(label, sites)
            idx.append(chain_index(sites, lab.m, lab.j, lab.D))
    except (ValueError, IndexError):
        raise CompileError("operator does not come from a fig4_lattice network") from None
    if sorted(idx) != list(range(6 * sites)):
        raise CompileError("operator does not come from a fig4_lattice network of this size")
    H = np.zeros_like(M)
    H[np.ix_(idx, idx)] = 1j * M
    return ChainOperator(sites, (H + H.conj().T) / 2, projected=False,
                         raw_hermiticity_residual=hermiticity_residual(H))
