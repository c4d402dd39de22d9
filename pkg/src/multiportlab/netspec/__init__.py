"""Network descriptions: parsing, validation and compilation to step operators."""
from .compile import (EdgeBasis, Mode, WalkResult, compile_evolution, edge_basis, injection_state,
                      lattice_chain_operator, run_walk)
from .errors import (ArityError, CompileError, ConnectivityError, DanglingPortError, DuplicateNodeError,
                     DuplicatePortError, NetspecError, NetspecSyntaxError, SchemaError, TerminalBalanceError,
                     UnknownNodeError, VersionError)
from .io import parse_network, serialize_network, spec_from_dict, spec_to_dict
from .model import FORMAT_VERSION, EdgeDef, NetworkSpec, NodeDef, TerminalDef
from .templates import compact_pair, fig3_chain, fig4_lattice, lattice_chain_label
from .validate import Diagnostic, validate_network

__all__ = [
    "ArityError", "CompileError", "ConnectivityError", "DanglingPortError", "Diagnostic", "DuplicateNodeError",
    "DuplicatePortError", "EdgeBasis", "EdgeDef", "FORMAT_VERSION", "Mode", "NetspecError", "NetspecSyntaxError",
    "NetworkSpec", "NodeDef", "SchemaError", "TerminalBalanceError", "TerminalDef", "UnknownNodeError",
    "VersionError", "WalkResult", "compact_pair", "compile_evolution", "edge_basis", "fig3_chain", "fig4_lattice",
    "golden_path", "injection_state", "lattice_chain_label", "lattice_chain_operator", "parse_network", "run_walk", "serialize_network",
    "spec_from_dict", "spec_to_dict", "validate_network",
]


def golden_path(name: str):
    """Path of a shipped example network (``fig3_chain_L4``, ``fig4_lattice_N4``, ``compact_pair``)."""
    from importlib.resources import files

    return files(__package__) / "golden" / f"{name}.json"
