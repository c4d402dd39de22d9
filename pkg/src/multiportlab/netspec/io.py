"""JSON reader and writer for network descriptions.

Document layout (``version`` must be 1)::

    {
      "version": 1,
      "nodes": [{"id": "a", "kind": "grover", "n": 3},
                {"id": "b", "kind": "custom", "n": 3, "vertex_phases": [0.1, 0.2, 0.3]}],
      "edges": [{"endpoint_a": ["a", 0], "endpoint_b": ["b", 0], "phase": 0.0, "directed": false}],
      "terminals": [["a", 1], {"endpoint": ["a", 2], "role": "in", "reflective": false}],
      "templates": {"fig3_chain": 4}
    }

Template entries are expanded and appended to the explicit lists. A
terminal given as a bare ``[node, port]`` pair is an absorbing ``io`` stub.
"""
from __future__ import annotations

import json
import math

from ..multiport import MultiportKind, MultiportSpec
from . import templates as tpl
from .errors import (ERROR_BY_CODE, NetspecSyntaxError, SchemaError, VersionError)
from .model import FORMAT_VERSION, EdgeDef, NetworkSpec, NodeDef, TerminalDef
from .validate import validate_network


def _endpoint(raw, where):
    if not (isinstance(raw, (list, tuple)) and len(raw) == 2
            and isinstance(raw[0], str) and isinstance(raw[1], int) and not isinstance(raw[1], bool)):
        raise SchemaError(f"{where}: endpoint must be [node_id, port_index], got {raw!r}")
    return raw[0], raw[1]


def _node(raw, i):
    if not isinstance(raw, dict) or "id" not in raw or "n" not in raw:
        raise SchemaError(f"nodes[{i}]: need at least 'id' and 'n'")
    unknown = set(raw) - {"id", "kind", "n", "vertex_phases"}
    if unknown:
        raise SchemaError(f"nodes[{i}]: unknown fields {sorted(unknown)}")
    try:
        spec = MultiportSpec(int(raw["n"]), MultiportKind(raw.get("kind", "grover")),
                             tuple(raw["vertex_phases"]) if raw.get("vertex_phases") is not None else None)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"nodes[{i}]: {exc}") from None
    return NodeDef(str(raw["id"]), spec)


def _edge(raw, i):
    if not isinstance(raw, dict) or "endpoint_a" not in raw or "endpoint_b" not in raw:
        raise SchemaError(f"edges[{i}]: need 'endpoint_a' and 'endpoint_b'")
    unknown = set(raw) - {"endpoint_a", "endpoint_b", "phase", "directed"}
    if unknown:
        raise SchemaError(f"edges[{i}]: unknown fields {sorted(unknown)}")
    phase = raw.get("phase", 0.0)
    if not isinstance(phase, (int, float)) or isinstance(phase, bool):
        raise SchemaError(f"edges[{i}]: phase must be a number")
    return EdgeDef(_endpoint(raw["endpoint_a"], f"edges[{i}]"), _endpoint(raw["endpoint_b"], f"edges[{i}]"),
                   float(phase), bool(raw.get("directed", False)))


def _terminal(raw, i):
    if isinstance(raw, (list, tuple)):
        node, port = _endpoint(raw, f"terminals[{i}]")
        return TerminalDef(node, port)
    if not isinstance(raw, dict) or "endpoint" not in raw:
        raise SchemaError(f"terminals[{i}]: need [node, port] or an object with 'endpoint'")
    unknown = set(raw) - {"endpoint", "role", "reflective"}
    if unknown:
        raise SchemaError(f"terminals[{i}]: unknown fields {sorted(unknown)}")
    node, port = _endpoint(raw["endpoint"], f"terminals[{i}]")
    return TerminalDef(node, port, str(raw.get("role", "io")), bool(raw.get("reflective", False)))


def _expand_templates(raw):
    if raw is None:
        return []
    if not isinstance(raw, dict):
        raise SchemaError("templates must be an object")
    out = []
    for name, arg in raw.items():
        if name not in tpl.TEMPLATES:
            raise SchemaError(f"unknown template {name!r}")
        if isinstance(arg, dict):
            arg = next(iter(arg.values()), None) if arg else None
        try:
            out.append(tpl.TEMPLATES[name]() if arg is None else tpl.TEMPLATES[name](int(arg)))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"template {name}: {exc}") from None
    return out


def spec_from_dict(doc) -> NetworkSpec:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    if "version" not in doc:
        raise VersionError("missing 'version'")
    if doc["version"] != FORMAT_VERSION:
        raise VersionError(f"unsupported version {doc['version']!r}; expected {FORMAT_VERSION}")
    unknown = set(doc) - {"version", "nodes", "edges", "terminals", "templates"}
    if unknown:
        raise SchemaError(f"unknown top-level fields {sorted(unknown)}")
    for key in ("nodes", "edges", "terminals"):
        if not isinstance(doc.get(key, []), list):
            raise SchemaError(f"'{key}' must be a list")
    nodes = [_node(x, i) for i, x in enumerate(doc.get("nodes", []))]
    edges = [_edge(x, i) for i, x in enumerate(doc.get("edges", []))]
    terminals = [_terminal(x, i) for i, x in enumerate(doc.get("terminals", []))]
    for t in _expand_templates(doc.get("templates")):
        nodes.extend(t.nodes)
        edges.extend(t.edges)
        terminals.extend(t.terminals)
    return NetworkSpec(FORMAT_VERSION, tuple(nodes), tuple(edges), tuple(terminals))


def parse_network(text) -> NetworkSpec:
    """Parse and validate a network description.

    Raises the NetspecError subclass of the first failed check; every
    diagnostic is attached as ``exc.diagnostics``.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NetspecSyntaxError(f"invalid UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetspecSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    spec = spec_from_dict(doc)
    diags = validate_network(spec)
    if diags:
        first = diags[0]
        raise ERROR_BY_CODE.get(first.code, SchemaError)(first.message, diags)
    return spec


def spec_to_dict(spec: NetworkSpec) -> dict:
    nodes = []
    for nd in spec.nodes:
        rec = {"id": nd.id, "kind": nd.spec.kind.value, "n": nd.spec.n}
        if nd.spec.vertex_phases is not None:
            rec["vertex_phases"] = list(nd.spec.vertex_phases)
        nodes.append(rec)
    edges = [{"endpoint_a": list(e.a), "endpoint_b": list(e.b), "phase": e.phase, "directed": e.directed}
             for e in spec.edges]
    terminals = [{"endpoint": [t.node, t.port], "role": t.role, "reflective": t.reflective}
                 for t in spec.terminals]
    return {"version": spec.version, "nodes": nodes, "edges": edges, "terminals": terminals}


def serialize_network(spec: NetworkSpec) -> str:
    for e in spec.edges:
        if not math.isfinite(e.phase):
            raise SchemaError("cannot serialise a non-finite phase")
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"
