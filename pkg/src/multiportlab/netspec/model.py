"""In-memory network description."""
from __future__ import annotations

from dataclasses import dataclass

from ..multiport import MultiportSpec

FORMAT_VERSION = 1
ROLES = ("io", "in", "out")


@dataclass(frozen=True)
class NodeDef:
    id: str
    spec: MultiportSpec


@dataclass(frozen=True)
class EdgeDef:
    """Line between two ports.

    A ``directed`` edge carries light only from ``a`` to ``b`` (circulator
    wiring); otherwise both directions exist. ``phase`` is the propagation
    phase, applied in each direction.
    """
    a: tuple[str, int]
    b: tuple[str, int]
    phase: float = 0.0
    directed: bool = False


@dataclass(frozen=True)
class TerminalDef:
    """External stub at a port.

    ``io`` stubs both inject into and collect from the port; ``in`` stubs
    only inject and ``out`` stubs only collect. Collected light is absorbed
    by a detector unless ``reflective``.
    """
    node: str
    port: int
    role: str = "io"
    reflective: bool = False


@dataclass(frozen=True)
class NetworkSpec:
    version: int
    nodes: tuple[NodeDef, ...]
    edges: tuple[EdgeDef, ...] = ()
    terminals: tuple[TerminalDef, ...] = ()

    def node(self, node_id: str) -> NodeDef:
        for nd in self.nodes:
            if nd.id == node_id:
                return nd
        raise KeyError(node_id)
