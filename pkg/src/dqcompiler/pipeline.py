"""End-to-end compilation of a circuit onto the QPU chain."""

from __future__ import annotations

import gc
from contextlib import contextmanager

from .circuit import Circuit, FrontLayerStream, GateKind
from .scheduler import CompiledProgram, schedule
from .strategies import UNIT_COSTS, Costs, DistributedOp, Strategy, compile_front_layer, local_gate
from .topology import build_linear


@contextmanager
def _cyclic_gc_paused():
    # compilation only builds acyclic immutable values; the cyclic collector
    # would rescan the growing op list and make long circuits superlinear
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def compile_circuit(
    circuit: Circuit,
    strategy: Strategy | str = Strategy.ES,
    epr_capacity: int = 1,
    costs: Costs = UNIT_COSTS,
    qpu_count: int | None = None,
    name: str | None = None,
) -> CompiledProgram:
    """Compile ``circuit`` with one logical qubit per QPU, identity placement.

    Front layers are extracted repeatedly. One-qubit gates and measurements
    consumed by an extraction run as local gates on the QPU currently holding
    their qubit; the CNOTs are lowered by ``strategy`` and the whole op stream
    is scheduled ASAP under the resource limits of the chain.
    """
    with _cyclic_gc_paused():
        return _compile(circuit, Strategy(strategy), epr_capacity, costs, qpu_count, name)


def _compile(circuit, strategy, epr_capacity, costs, qpu_count, name) -> CompiledProgram:
    qpu_count = max(circuit.n, 2) if qpu_count is None else qpu_count
    t = build_linear(qpu_count, epr_capacity, circuit.n)
    initial = t.assignment
    per_layer: list[list[DistributedOp]] = []
    swaps = 0
    for front in FrontLayerStream(circuit):
        ops = [
            local_gate(g, t.qpu_of(g.qubits[0]))
            for g in front.passthrough_one_qubit
            if g.kind is not GateKind.BARRIER
        ]
        if front.cnots:
            lowered = compile_front_layer(front, t, strategy, costs)
            ops += lowered.ops
            swaps += len(lowered.swaps)
            t = lowered.topology
        if ops:
            per_layer.append(ops)
    return schedule(
        per_layer,
        build_linear(qpu_count, epr_capacity, circuit.n),
        costs,
        n=circuit.n,
        strategy=strategy.value,
        source=name if name is not None else circuit.name,
        initial_assignment=initial,
        final_assignment=t.assignment,
        swaps_performed=swaps,
    )
