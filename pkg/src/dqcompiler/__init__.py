"""Compiler for distributed quantum circuits on a linear chain of single-qubit QPUs."""

from .audit import AuditReport, audit
from .circuit import Circuit, Gate, GateKind, FrontLayerStream, cnot_layer_count, compute_layers
from .pipeline import compile_circuit
from .qasm import ParseDiagnostic, QasmError, parse, parse_file, serialize
from .scheduler import BoundReport, CompiledProgram, Metrics, bounds, measure
from .strategies import UNIT_COSTS, Costs, OpKind, Strategy, sort_pairs
from .topology import Topology, build_linear

__all__ = [
    "AuditReport", "BoundReport", "Circuit", "CompiledProgram", "Costs", "FrontLayerStream",
    "Gate", "GateKind", "Metrics", "OpKind", "ParseDiagnostic", "QasmError", "Strategy",
    "Topology", "UNIT_COSTS", "audit", "bounds", "build_linear", "cnot_layer_count",
    "compile_circuit", "compute_layers", "measure", "parse", "parse_file", "serialize",
    "sort_pairs",
]  # fmt: skip
