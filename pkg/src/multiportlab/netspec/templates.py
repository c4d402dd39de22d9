"""Standard layouts: the one-way chain, the two-branch lattice and the compact pair."""
from __future__ import annotations

from ..multiport import MultiportSpec
from .model import FORMAT_VERSION, EdgeDef, NetworkSpec, NodeDef, TerminalDef

# lattice three-port ports
LEFT, RIGHT, VERTICAL = 0, 1, 2


def _ids(prefix: str, count: int) -> list[str]:
    width = max(2, len(str(count - 1)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def fig3_chain(length: int, n: int = 3) -> NetworkSpec:
    """Multiports in series, each port ``p`` feeding port ``p`` of the next.

    Lines are one-way (the circulators), light enters at the first multiport
    and is detected after the last.
    """
    if length < 1:
        raise ValueError("chain length must be at least 1")
    ids = _ids("c", length)
    nodes = tuple(NodeDef(i, MultiportSpec(n)) for i in ids)
    edges = tuple(EdgeDef((ids[s], p), (ids[s + 1], p), 0.0, directed=True)
                  for s in range(length - 1) for p in range(n))
    terminals = tuple(TerminalDef(ids[0], p, "in") for p in range(n)) + \
        tuple(TerminalDef(ids[-1], p, "out") for p in range(n))
    return NetworkSpec(FORMAT_VERSION, nodes, edges, terminals)


def fig4_lattice(sites: int) -> NetworkSpec:
    """Periodic ladder: top and bottom three-ports per site joined vertically.

    Upper and lower horizontal lines link site ``m`` to ``m + 1`` (mod N).
    """
    if sites < 2:
        raise ValueError("the lattice needs at least two sites")
    top, bot = _ids("t", sites), _ids("b", sites)
    nodes = tuple(NodeDef(i, MultiportSpec(3)) for i in top + bot)
    edges = []
    for m in range(sites):
        nxt = (m + 1) % sites
        edges.append(EdgeDef((top[m], VERTICAL), (bot[m], VERTICAL)))
        edges.append(EdgeDef((top[m], RIGHT), (top[nxt], LEFT)))
        edges.append(EdgeDef((bot[m], RIGHT), (bot[nxt], LEFT)))
    return NetworkSpec(FORMAT_VERSION, nodes, tuple(edges), ())


def compact_pair(n: int = 3) -> NetworkSpec:
    """Two facing multiports joined port-to-port by ``n`` two-way lines."""
    nodes = (NodeDef("l", MultiportSpec(n)), NodeDef("r", MultiportSpec(n)))
    edges = tuple(EdgeDef(("l", p), ("r", p)) for p in range(n))
    return NetworkSpec(FORMAT_VERSION, nodes, edges, ())


TEMPLATES = {
    "fig3_chain": fig3_chain,
    "fig4_lattice": fig4_lattice,
    "compact_pair": compact_pair,
}


def lattice_chain_label(label, sites: int):
    """Map a fig4_lattice mode label to ``(m, j, D)`` of the chain module."""
    from ..chain import ChainLabel

    node, port, _ = label
    m = int(node[1:])
    top = node[0] == "t"
    j = 1 if top else -1
    if port == VERTICAL:
        return ChainLabel(m, 0, "R" if top else "L")
    if port == RIGHT:
        return ChainLabel(m, j, "R")
    return ChainLabel((m - 1) % sites, j, "L")
