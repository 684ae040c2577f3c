"""Gate-level circuit IR: layering, CNOT-layer counts and front-layer extraction."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence


class GateKind(str, Enum):
    ONE_QUBIT = "one_qubit"
    CNOT = "cnot"
    MEASURE = "measure"
    BARRIER = "barrier"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    name: str
    qubits: tuple[int, ...]
    params: tuple[str, ...] = ()
    seq: int = 0

    def __post_init__(self):
        if self.kind is GateKind.CNOT:
            if len(self.qubits) != 2:
                raise ValueError(f"cx needs exactly two qubits, got {self.qubits}")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError(f"cx control equals target (q{self.qubits[0]})")
        elif self.kind in (GateKind.ONE_QUBIT, GateKind.MEASURE):
            if len(self.qubits) != 1:
                raise ValueError(f"{self.name} acts on one qubit, got {self.qubits}")
        elif not self.qubits:
            raise ValueError("a barrier must span at least one qubit")

    @property
    def is_cnot(self) -> bool:
        return self.kind is GateKind.CNOT

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[1]

    def __str__(self) -> str:
        args = ",".join(f"q{q}" for q in self.qubits)
        if self.params:
            return f"{self.name}({','.join(self.params)}) {args}"
        return f"{self.name} {args}"


def cx(control: int, target: int, seq: int = 0) -> Gate:
    return Gate(GateKind.CNOT, "cx", (control, target), seq=seq)


def one_qubit(name: str, qubit: int, params: Sequence[str] = (), seq: int = 0) -> Gate:
    return Gate(GateKind.ONE_QUBIT, name, (qubit,), tuple(params), seq=seq)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n`` logical qubits."""

    n: int
    gates: tuple[Gate, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a circuit needs at least one qubit")
        last = -1
        for g in self.gates:
            if g.seq <= last:
                raise ValueError(f"gate seq values must increase (got {g.seq} after {last})")
            last = g.seq
            for q in g.qubits:
                if not 0 <= q < self.n:
                    raise ValueError(f"qubit {q} out of range for n={self.n}")

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate], name: str = "") -> "Circuit":
        """Build a circuit, renumbering ``seq`` to program order."""
        renumbered = tuple(
            Gate(g.kind, g.name, g.qubits, g.params, seq=i) for i, g in enumerate(gates)
        )
        return cls(n, renumbered, name)

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.is_cnot)

    def __len__(self) -> int:
        return len(self.gates)


def compute_layers(circuit: Circuit) -> tuple[list[list[Gate]], int]:
    """Greedy ASAP layering.

    Every gate goes into the earliest layer after all earlier gates that share a
    qubit with it. A barrier places nothing but closes every open layer: all
    later gates start after all layers opened so far.

    Returns:
        The layers (lists of gates in program order) and the depth.
    """
    level = [0] * circuit.n
    layers: list[list[Gate]] = []
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER:
            level = [len(layers)] * circuit.n
            continue
        idx = max(level[q] for q in g.qubits)
        if idx == len(layers):
            layers.append([])
        layers[idx].append(g)
        for q in g.qubits:
            level[q] = idx + 1
    return layers, len(layers)


CNOT_LAYER_RULES = ("any", "pure")


def cnot_layer_count(circuit: Circuit, rule: str = "any") -> int:
    """Number of ASAP layers holding CNOTs.

    ``rule="any"`` counts every layer with at least one CNOT; ``rule="pure"``
    only counts layers made of CNOTs alone.
    """
    if rule not in CNOT_LAYER_RULES:
        raise ValueError(f"unknown CNOT layer rule {rule!r}; expected one of {CNOT_LAYER_RULES}")
    layers, _ = compute_layers(circuit)
    if rule == "any":
        return sum(1 for layer in layers if any(g.is_cnot for g in layer))
    return sum(1 for layer in layers if layer and all(g.is_cnot for g in layer))


@dataclass
class FrontLayer:
    cnots: list[Gate] = field(default_factory=list)
    passthrough_one_qubit: list[Gate] = field(default_factory=list)
    allocated: set[int] = field(default_factory=set)

    def __bool__(self) -> bool:
        return bool(self.cnots)


def update_front_layer(
    pending: list[Gate], executed: list[Gate], width: int | None = None
) -> tuple[list[Gate], FrontLayer]:
    """One pass of the front-layer update over ``pending`` (program order).

    A gate whose qubits are all unallocated is consumed: one-qubit gates (and
    measurements) are appended to ``executed``, CNOTs join the front layer and
    allocate their qubits. A gate touching an allocated qubit stays pending and
    allocates all of its qubits. The scan stops once ``width`` qubits are
    allocated. Barriers are consumed like one-qubit gates but allocate every
    qubit they span, so no later gate on those qubits joins the same front layer.

    This is the literal linear scan; :class:`FrontLayerStream` yields the same
    sequence of front layers without rescanning the pending list.
    """
    if width is None:
        width = 1 + max((q for g in pending for q in g.qubits), default=-1)
    front = FrontLayer()
    allocated = front.allocated
    remaining: list[Gate] = []
    stopped_at = len(pending)
    for i, gate in enumerate(pending):
        if len(allocated) >= width:
            stopped_at = i
            break
        if allocated.isdisjoint(gate.qubits):
            if gate.is_cnot:
                front.cnots.append(gate)
                allocated.update(gate.qubits)
            else:
                executed.append(gate)
                front.passthrough_one_qubit.append(gate)
                if gate.kind is GateKind.BARRIER:
                    allocated.update(gate.qubits)
        else:
            allocated.update(gate.qubits)
            remaining.append(gate)
    remaining.extend(pending[stopped_at:])
    if pending and len(remaining) >= len(pending):
        raise RuntimeError("front-layer update made no progress")
    return remaining, front


class FrontLayerStream:
    """Incremental front-layer extraction over a whole circuit.

    Produces exactly the front layers of repeated :func:`update_front_layer`
    calls, but keeps one queue per qubit so each call costs O(n log n) plus the
    gates it consumes instead of a scan of everything still pending.
    """

    def __init__(self, circuit: Circuit):
        self._gates = circuit.gates
        self._queues: list[deque[int]] = [deque() for _ in range(circuit.n)]
        for i, g in enumerate(self._gates):
            for q in g.qubits:
                self._queues[q].append(i)
        self._left = len(self._gates)

    @property
    def done(self) -> bool:
        return self._left == 0

    def _ready(self, i: int) -> bool:
        return all(self._queues[q] and self._queues[q][0] == i for q in self._gates[i].qubits)

    def next_layer(self) -> FrontLayer:
        if self.done:
            raise StopIteration
        front = FrontLayer()
        allocated = front.allocated
        heap = sorted({qu[0] for qu in self._queues if qu and self._ready(qu[0])})
        queued = set(heap)
        while heap:
            i = heapq.heappop(heap)
            gate = self._gates[i]
            if not allocated.isdisjoint(gate.qubits):
                continue
            for q in gate.qubits:
                self._queues[q].popleft()
            self._left -= 1
            if gate.is_cnot:
                front.cnots.append(gate)
                allocated.update(gate.qubits)
                continue
            front.passthrough_one_qubit.append(gate)
            if gate.kind is GateKind.BARRIER:
                allocated.update(gate.qubits)
                continue
            q = gate.qubits[0]
            if self._queues[q]:
                nxt = self._queues[q][0]
                if nxt not in queued and self._ready(nxt):
                    queued.add(nxt)
                    heapq.heappush(heap, nxt)
        return front

    def __iter__(self) -> Iterator[FrontLayer]:
        while not self.done:
            yield self.next_layer()
