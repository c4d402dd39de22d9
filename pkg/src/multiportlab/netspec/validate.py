"""Structural checks on a NetworkSpec, reported as diagnostics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .model import ROLES, NetworkSpec


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    where: tuple = ()

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "where": list(self.where)}


def port_slots(spec: NetworkSpec):
    """Claims on each ``(node, port, slot)`` with slot ``in`` or ``out``."""
    claims: list[tuple[tuple, str]] = []
    for e in spec.edges:
        what = f"edge {e.a}->{e.b}"
        claims.append(((*e.a, "out"), what))
        claims.append(((*e.b, "in"), what))
        if not e.directed:
            claims.append(((*e.b, "out"), what))
            claims.append(((*e.a, "in"), what))
    for t in spec.terminals:
        what = f"terminal {t.node}:{t.port}"
        if t.role in ("io", "in"):
            claims.append(((t.node, t.port, "in"), what))
        if t.role in ("io", "out"):
            claims.append(((t.node, t.port, "out"), what))
    return claims


def validate_network(spec: NetworkSpec) -> list[Diagnostic]:
    """All invariant violations, in a fixed order; empty when the network is valid."""
    diags: list[Diagnostic] = []
    ids = [n.id for n in spec.nodes]
    arity = {n.id: n.spec.n for n in spec.nodes}

    for node_id, count in sorted(Counter(ids).items()):
        if count > 1:
            diags.append(Diagnostic("duplicate-node", f"node id {node_id!r} declared {count} times", (node_id,)))

    refs = [e.a for e in spec.edges] + [e.b for e in spec.edges] + [(t.node, t.port) for t in spec.terminals]
    for node_id, port in refs:
        if node_id not in arity:
            diags.append(Diagnostic("unknown-node", f"reference to undeclared node {node_id!r}", (node_id, port)))
        elif not 0 <= port < arity[node_id]:
            diags.append(Diagnostic("arity", f"port {port} does not exist on {arity[node_id]}-port node {node_id!r}",
                                    (node_id, port)))
    for t in spec.terminals:
        if t.role not in ROLES:
            diags.append(Diagnostic("schema", f"terminal role {t.role!r} not in {ROLES}", (t.node, t.port)))
    for e in spec.edges:
        if not math.isfinite(e.phase):
            diags.append(Diagnostic("bad-phase", f"edge {e.a}->{e.b} has non-finite phase", (*e.a, *e.b)))

    claims = port_slots(spec)
    seen = Counter(slot for slot, _ in claims)
    reported = set()
    for slot, _ in claims:
        if seen[slot] > 1 and slot[:2] not in reported:
            reported.add(slot[:2])
            diags.append(Diagnostic("duplicate-port", f"port {slot[0]}:{slot[1]} is used more than once", slot[:2]))
    for node_id in dict.fromkeys(ids):
        for port in range(arity[node_id]):
            missing = [s for s in ("in", "out") if (node_id, port, s) not in seen]
            if missing:
                diags.append(Diagnostic("dangling-port",
                                        f"port {node_id}:{port} has no {' or '.join(missing)} connection",
                                        (node_id, port)))

    n_in = sum(t.role == "in" for t in spec.terminals)
    n_out = sum(t.role == "out" for t in spec.terminals)
    if n_in != n_out:
        diags.append(Diagnostic("terminal-balance", f"{n_in} input-only vs {n_out} output-only terminals"))

    if ids:
        parent = {i: i for i in ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in spec.edges:
            if e.a[0] in parent and e.b[0] in parent:
                parent[find(e.a[0])] = find(e.b[0])
        roots = {find(i) for i in ids}
        if len(roots) > 1:
            diags.append(Diagnostic("disconnected", f"network has {len(roots)} disconnected components"))
    return diags
