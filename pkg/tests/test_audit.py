from dataclasses import replace

import pytest

from dqcompiler import audit, compile_circuit
from dqcompiler.circuit import Circuit, cx, one_qubit
from dqcompiler.strategies import OpKind
from dqcompiler.topology import CommSlot

CIRCUIT = Circuit.from_gates(
    5, [one_qubit("h", 0), cx(0, 3), cx(1, 4), cx(3, 2), one_qubit("t", 2), cx(2, 0), cx(4, 1)]
)


@pytest.fixture(params=[("es", 1), ("es", 2), ("dqs", 1), ("dqs", 2)], ids=str)
def program(request):
    strategy, cap = request.param
    return compile_circuit(CIRCUIT, strategy, cap)


def with_ops(p, ops):
    ops = tuple(replace(s, index=i) for i, s in enumerate(ops))
    return replace(p, ops=ops, depth=max(s.end for s in ops))


def test_compiled_programs_pass(program):
    report = audit(program, CIRCUIT)
    assert report.ok, report.errors
    assert report.epr_generated == report.epr_consumed > 0
    assert report.gates_checked == len(CIRCUIT.gates)


def test_missing_link_is_caught(program):
    i = next(i for i, s in enumerate(program.ops) if s.kind is OpKind.LINK)
    report = audit(with_ops(program, program.ops[:i] + program.ops[i + 1 :]), CIRCUIT)
    assert not report.ok


def test_early_remote_cnot_is_caught(program):
    i = next(i for i, s in enumerate(program.ops) if s.kind is OpKind.REMOTE_CNOT)
    s = program.ops[i]
    early = replace(s, start=s.start - 1, end=s.end - 1)
    report = audit(with_ops(program, program.ops[:i] + (early,) + program.ops[i + 1 :]), CIRCUIT)
    assert not report.ok


def test_reordered_gates_are_caught():
    p = compile_circuit(CIRCUIT, "es", 2)
    rcs = [s for s in p.ops if s.kind is OpKind.REMOTE_CNOT and s.op.seq in (2, 5)]
    a, b = rcs
    # give each gate the other's operands: the parity check must notice
    swapped = {a.index: replace(a, op=replace(a.op, seq=b.op.seq)),
               b.index: replace(b, op=replace(b.op, seq=a.op.seq))}  # fmt: skip
    report = audit(with_ops(p, [swapped.get(s.index, s) for s in p.ops]), CIRCUIT)
    assert any("operands" in e for e in report.errors)


def test_wrong_final_placement_is_caught(program):
    bad = list(program.final_assignment)
    bad[0], bad[1] = bad[1], bad[0]
    report = audit(replace(program, final_assignment=tuple(bad)), CIRCUIT)
    assert any("expected on QPU" in e for e in report.errors)


def test_nonexistent_slot_is_caught():
    p = compile_circuit(Circuit.from_gates(2, [cx(0, 1)]), "es")
    link = p.ops[0]
    ghost = replace(link, slots=(CommSlot(0, "R", 1), CommSlot(1, "L", 1)))
    report = audit(with_ops(p, (ghost,) + p.ops[1:]), Circuit.from_gates(2, [cx(0, 1)]))
    assert any("does not exist" in e for e in report.errors)


def test_overlapping_use_of_a_slot_is_caught():
    c = Circuit.from_gates(3, [cx(0, 1), cx(1, 2)])
    p = compile_circuit(c, "es")
    second = [s for s in p.ops if s.front_layer == 1]
    moved = [replace(s, start=s.start - 1, end=s.end - 1) for s in second]
    report = audit(with_ops(p, [s for s in p.ops if s.front_layer == 0] + moved), c)
    assert any("both use" in e for e in report.errors)


def test_unrealized_gate_is_caught():
    c = Circuit.from_gates(2, [cx(0, 1)])
    p = compile_circuit(c, "es")
    longer = Circuit.from_gates(2, [cx(0, 1), one_qubit("h", 0)])
    report = audit(p, longer)
    assert any("never realized" in e for e in report.errors)
