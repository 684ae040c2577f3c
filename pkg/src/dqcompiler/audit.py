"""Independent replay of a compiled program.

The audit does not reuse the scheduler's bookkeeping. It walks the op events
in time order and tracks every data and communication qubit of the chain:

* communication qubits move EMPTY -> PAIR (link entanglement) -> EMPTY
  (consumed by a remote CNOT, teleport or an entanglement swap), or hold a
  teleported data state until a local swap stores it;
* no physical qubit is used by two overlapping ops;
* data contents are tracked as GF(2) parity masks over the input qubits, so
  every CNOT a remote CNOT realizes (and every local gate) must see exactly the
  operands the original circuit gives it, and SWAPs built from three CNOTs
  must really exchange the data.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .circuit import Circuit, GateKind
from .scheduler import CompiledProgram, ScheduledOp
from .strategies import OpKind
from .topology import CommSlot


@dataclass
class AuditReport:
    errors: list[str] = field(default_factory=list)
    epr_generated: int = 0
    epr_consumed: int = 0
    peak_comm_in_use: int = 0
    gates_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def _ideal_operands(circuit: Circuit) -> dict[int, tuple[int, ...]]:
    """Parity mask of each operand just before each gate, plus final masks under key -1."""
    mask = [1 << q for q in range(circuit.n)]
    before: dict[int, tuple[int, ...]] = {}
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            continue
        before[g.seq] = tuple(mask[q] for q in g.qubits)
        if g.is_cnot:
            mask[g.target] ^= mask[g.control]
    before[-1] = tuple(mask)
    return before


class _Replay:
    def __init__(self, p: CompiledProgram, circuit: Circuit, report: AuditReport):
        self.p = p
        self.r = report
        self.ideal = _ideal_operands(circuit)
        self.data: list[int | None] = [None] * p.qpu_count
        for q, qpu in enumerate(p.initial_assignment):
            self.data[qpu] = 1 << q
        # comm slot -> ("pair", partner, links) | ("data", mask)
        self.comm: dict[CommSlot, tuple] = {}
        self.in_flight: dict[int, int | None] = {}

    def err(self, s: ScheduledOp, msg: str) -> None:
        self.r.errors.append(f"op#{s.index} {s.kind.value} {s.op.qpus} @[{s.start},{s.end}): {msg}")

    def _check_slot(self, s: ScheduledOp, slot: CommSlot) -> bool:
        last = self.p.qpu_count - 1
        good = (
            0 <= slot.qpu <= last
            and 0 <= slot.index < self.p.epr_capacity
            and (slot.side == "L" and slot.qpu > 0 or slot.side == "R" and slot.qpu < last)
        )
        if not good:
            self.err(s, f"slot {slot} does not exist")
        return good

    def _paired(self, s: ScheduledOp, a: CommSlot, b: CommSlot) -> int:
        sa, sb = self.comm.get(a), self.comm.get(b)
        if not (sa and sb and sa[0] == "pair" and sb[0] == "pair" and sa[1] == b and sb[1] == a):
            self.err(s, f"{a} and {b} do not share a Bell pair")
            return 0
        return sa[2]

    def _operands(self, s: ScheduledOp, masks: tuple[int | None, ...]) -> None:
        seq = s.op.seq
        if seq is None:
            return
        self.r.gates_checked += 1
        want = self.ideal.get(seq)
        if want is None:
            self.err(s, f"realizes unknown gate #{seq}")
        elif tuple(masks) != want:
            self.err(s, f"gate #{seq} sees operands {masks}, expected {want}")

    # -- event handlers ------------------------------------------------------

    def start(self, s: ScheduledOp) -> None:
        op = s.op
        if not all(self._check_slot(s, slot) for slot in s.slots):
            return
        if op.kind is OpKind.LINK:
            if len(s.slots) != 2:
                return self.err(s, "link entanglement needs two slots")
            a, b = s.slots
            if (a.qpu, a.side, b.qpu, b.side) != (op.qpus[0], "R", op.qpus[1], "L"):
                self.err(s, f"slots {a},{b} do not face each other across the link")
            for slot in s.slots:
                if slot in self.comm:
                    self.err(s, f"slot {slot} is not empty")
        elif op.kind is OpKind.ENT_SWAP:
            chain = op.qpus
            if len(s.slots) != 2 * (len(chain) - 1):
                return self.err(s, "entanglement swap slot list does not match its chain")
            links = 0
            for k, (a, b) in enumerate(zip(chain, chain[1:])):
                left, right = s.slots[2 * k], s.slots[2 * k + 1]
                if (left.qpu, right.qpu) != (a, b):
                    self.err(s, f"segment {left},{right} is not edge {a}-{b}")
                links += self._paired(s, left, right)
            self.in_flight[s.index] = links
        elif op.kind is OpKind.REMOTE_CNOT:
            qc, qt = op.qpus
            sc, st = s.slots
            if (sc.qpu, st.qpu) != (qc, qt):
                self.err(s, f"slots {sc},{st} are not on QPUs {qc},{qt}")
            self.in_flight[s.index] = self._paired(s, sc, st)
            self._operands(s, (self.data[qc], self.data[qt]))
            if self.data[qc] is None or self.data[qt] is None:
                self.err(s, "remote CNOT on an empty data qubit")
        elif op.kind is OpKind.TELEPORT:
            src, dst = op.qpus
            here, there = s.slots
            if (here.qpu, there.qpu) != (src, dst):
                self.err(s, f"slots {here},{there} are not on QPUs {src},{dst}")
            self.in_flight[s.index] = self._paired(s, here, there)
            if self.data[src] is None:
                self.err(s, "teleporting an empty data qubit")
            self.comm[here] = ("busy",)
            self.comm[there] = ("busy",)
        elif op.kind is OpKind.LOCAL_SWAP:
            (qpu,) = op.qpus
            (slot,) = s.slots
            held = self.comm.get(slot)
            if not held or held[0] != "data" or slot.qpu != qpu:
                self.err(s, f"slot {slot} holds no teleported state on QPU {qpu}")
            if self.data[qpu] is not None:
                self.err(s, f"data qubit of QPU {qpu} is still occupied")
        elif op.kind is OpKind.LOCAL_GATE:
            (qpu,) = op.qpus
            if self.data[qpu] is None:
                self.err(s, f"local gate on empty QPU {qpu}")
            self._operands(s, (self.data[qpu],))

    def end(self, s: ScheduledOp) -> None:
        op = s.op
        if op.kind is OpKind.LINK and len(s.slots) == 2:
            a, b = s.slots
            self.comm[a] = ("pair", b, 1)
            self.comm[b] = ("pair", a, 1)
            self.r.epr_generated += 1
        elif op.kind is OpKind.ENT_SWAP and s.index in self.in_flight:
            links = self.in_flight.pop(s.index)
            for slot in s.slots:
                self.comm.pop(slot, None)
            a, b = s.slots[0], s.slots[-1]
            self.comm[a] = ("pair", b, links)
            self.comm[b] = ("pair", a, links)
        elif op.kind is OpKind.REMOTE_CNOT and s.index in self.in_flight:
            self.r.epr_consumed += self.in_flight.pop(s.index)
            for slot in s.slots:
                self.comm.pop(slot, None)
            qc, qt = op.qpus
            if self.data[qc] is not None and self.data[qt] is not None:
                self.data[qt] ^= self.data[qc]
        elif op.kind is OpKind.TELEPORT and s.index in self.in_flight:
            self.r.epr_consumed += self.in_flight.pop(s.index)
            here, there = s.slots
            self.comm.pop(here, None)
            self.comm[there] = ("data", self.data[op.qpus[0]])
            self.data[op.qpus[0]] = None
        elif op.kind is OpKind.LOCAL_SWAP:
            (qpu,) = op.qpus
            (slot,) = s.slots
            held = self.comm.pop(slot, None)
            if held and held[0] == "data":
                self.data[qpu] = held[1]
        self.r.peak_comm_in_use = max(self.r.peak_comm_in_use, len(self.comm))


def _resources(s: ScheduledOp) -> list:
    op = s.op
    if op.kind is OpKind.LINK:
        return list(s.slots)
    if op.kind is OpKind.ENT_SWAP:
        return list(s.slots[1:-1])
    if op.kind is OpKind.REMOTE_CNOT:
        return [("data", q) for q in op.qpus] + list(s.slots)
    if op.kind is OpKind.TELEPORT:
        return [("data", op.qpus[0])] + list(s.slots)
    return [("data", q) for q in op.qpus] + list(s.slots)


def audit(p: CompiledProgram, circuit: Circuit) -> AuditReport:
    """Replay ``p`` against the circuit it was compiled from."""
    report = AuditReport()
    busy: dict = defaultdict(list)
    for s in p.ops:
        if s.end - s.start != s.op.cost_layers or s.start < 0:
            report.errors.append(f"op#{s.index} spans [{s.start},{s.end}) but costs {s.op.cost_layers}")
        for res in _resources(s):
            busy[res].append((s.start, s.end, s.index))
    for res, spans in busy.items():
        spans.sort()
        for (s0, e0, i0), (s1, e1, i1) in zip(spans, spans[1:]):
            if s1 < e0:
                report.errors.append(f"ops #{i0} and #{i1} both use {res} around layer {s1}")
    if p.depth != max((s.end for s in p.ops), default=0):
        report.errors.append(f"depth {p.depth} does not match the last op end")

    replay = _Replay(p, circuit, report)
    events = defaultdict(lambda: ([], []))
    for s in p.ops:
        events[s.start][1].append(s)
        events[s.end][0].append(s)
    for t in sorted(events):
        ends, starts = events[t]
        for s in ends:
            replay.end(s)
        for s in starts:
            replay.start(s)

    if replay.comm:
        report.errors.append(f"communication qubits left occupied: {sorted(map(str, replay.comm))}")
    if report.epr_generated != report.epr_consumed:
        report.errors.append(
            f"{report.epr_generated} Bell pairs generated but {report.epr_consumed} consumed"
        )
    final = replay.ideal[-1]
    for q, qpu in enumerate(p.final_assignment):
        if replay.data[qpu] != final[q]:
            report.errors.append(f"q{q} expected on QPU {qpu} with parity {final[q]:#x}")
    realized = {s.op.seq for s in p.ops if s.op.seq is not None}
    missing = [g.seq for g in circuit.gates if g.kind is not GateKind.BARRIER and g.seq not in realized]
    if missing:
        report.errors.append(f"gates never realized: {missing[:10]}")
    return report
