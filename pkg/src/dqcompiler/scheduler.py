"""Resource-constrained ASAP scheduling, program metrics and depth bounds."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .strategies import UNIT_COSTS, Costs, DistributedOp, OpKind, Strategy
from .topology import CommSlot, Topology


class SchedulingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ScheduledOp:
    op: DistributedOp
    start: int
    end: int
    slots: tuple[CommSlot, ...]
    front_layer: int
    index: int

    @property
    def kind(self) -> OpKind:
        return self.op.kind


@dataclass(frozen=True)
class CompiledProgram:
    ops: tuple[ScheduledOp, ...]
    depth: int
    n: int
    qpu_count: int
    epr_capacity: int
    costs: Costs = UNIT_COSTS
    strategy: str = ""
    source: str = ""
    initial_assignment: tuple[int, ...] = ()
    final_assignment: tuple[int, ...] = ()
    swaps_performed: int = 0
    front_layers: int = 0

    @property
    def layers(self) -> list[list[ScheduledOp]]:
        """Ops grouped by the layer they start in."""
        grouped: list[list[ScheduledOp]] = [[] for _ in range(self.depth)]
        for s in self.ops:
            grouped[s.start].append(s)
        return grouped

    def active(self) -> list[list[ScheduledOp]]:
        """Ops occupying each layer (multi-layer ops appear in every layer they span)."""
        occupied: list[list[ScheduledOp]] = [[] for _ in range(self.depth)]
        for s in self.ops:
            for t in range(s.start, s.end):
                occupied[t].append(s)
        return occupied

    def topology_summary(self) -> str:
        return f"linear qpus={self.qpu_count} epr_capacity={self.epr_capacity}"


def _bundles(ops: Sequence[DistributedOp]) -> list[list[DistributedOp]]:
    """Split an emitted op stream into self-contained primitives.

    A bundle closes after a remote CNOT, a local gate, or the last local swap of
    a teleport-based exchange.
    """
    out: list[list[DistributedOp]] = []
    cur: list[DistributedOp] = []
    for i, op in enumerate(ops):
        cur.append(op)
        nxt = ops[i + 1] if i + 1 < len(ops) else None
        if op.kind in (OpKind.REMOTE_CNOT, OpKind.LOCAL_GATE) or (
            op.kind is OpKind.LOCAL_SWAP and (nxt is None or nxt.kind is not OpKind.LOCAL_SWAP)
        ):
            out.append(cur)
            cur = []
    if cur:
        raise SchedulingError(f"dangling ops without a consumer: {[o.kind.value for o in cur]}")
    return out


class _Timeline:
    def __init__(self, topology: Topology):
        self.capacity = topology.epr_capacity
        self.data_free = [0] * topology.qpu_count
        self.slot_free: dict[CommSlot, int] = defaultdict(int)
        self.out: list[ScheduledOp] = []
        self.front_layer = 0

    def emit(self, op: DistributedOp, start: int, slots: tuple[CommSlot, ...] = ()) -> int:
        end = start + op.cost_layers
        self.out.append(ScheduledOp(op, start, end, slots, self.front_layer, len(self.out)))
        return end

    def place(self, bundle: list[DistributedOp]) -> None:
        links = [op for op in bundle if op.kind is OpKind.LINK]
        swaps = [op for op in bundle if op.kind is OpKind.ENT_SWAP]
        rest = [op for op in bundle if op.kind not in (OpKind.LINK, OpKind.ENT_SWAP)]

        # all link entanglements of a primitive start together
        chosen: list[tuple[DistributedOp, int]] = []
        taken: set[tuple[int, int]] = set()
        for op in links:
            i = op.qpus[0]
            options = [k for k in range(self.capacity) if (i, k) not in taken]
            if not options:
                raise SchedulingError(f"edge {i}-{i + 1} over capacity in {op}")
            k = min(options, key=lambda k: (self._edge_free(i, k), k))
            taken.add((i, k))
            chosen.append((op, k))
        t_link = max((self._edge_free(op.qpus[0], k) for op, k in chosen), default=0)
        # unconsumed Bell pairs: edge -> [(left slot, right slot, ready)]
        pairs: dict[tuple[int, int], list[tuple[CommSlot, CommSlot, int]]] = defaultdict(list)
        for op, k in chosen:
            i = op.qpus[0]
            left, right = CommSlot(i, "R", k), CommSlot(i + 1, "L", k)
            ready = self.emit(op, t_link, (left, right))
            pairs[(i, i + 1)].append((left, right, ready))

        for op in swaps:
            chain = op.qpus
            segs = []
            for a, b in zip(chain, chain[1:]):
                if not pairs[(a, b)]:
                    raise SchedulingError(f"no Bell pair on edge {a}-{b} for {op}")
                segs.append(pairs[(a, b)].pop(0))
            start = max(seg[2] for seg in segs)
            slots = tuple(s for seg in segs for s in seg[:2])
            end = self.emit(op, start, slots)
            for s in slots[1:-1]:
                self.slot_free[s] = end
            pairs[(chain[0], chain[-1])].append((slots[0], slots[-1], end))

        arrived: dict[int, tuple[CommSlot, int]] = {}
        for op in rest:
            if op.kind is OpKind.REMOTE_CNOT:
                qc, qt = op.qpus
                left, right, ready = self._take(pairs, qc, qt, op)
                start = max(ready, self.data_free[qc], self.data_free[qt])
                end = self.emit(op, start, (left, right) if qc < qt else (right, left))
                self.slot_free[left] = self.slot_free[right] = end
                self.data_free[qc] = self.data_free[qt] = end
            elif op.kind is OpKind.TELEPORT:
                src, dst = op.qpus
                left, right, ready = self._take(pairs, src, dst, op)
                here, there = (left, right) if src < dst else (right, left)
                start = max(ready, self.data_free[src])
                end = self.emit(op, start, (here, there))
                self.slot_free[here] = end
                self.data_free[src] = end
                arrived[dst] = (there, end)
            elif op.kind is OpKind.LOCAL_SWAP:
                (qpu,) = op.qpus
                if qpu not in arrived:
                    raise SchedulingError(f"local swap on QPU {qpu} has no teleported state")
                slot, ready = arrived.pop(qpu)
                start = max(ready, self.data_free[qpu])
                end = self.emit(op, start, (slot,))
                self.slot_free[slot] = end
                self.data_free[qpu] = end
            elif op.kind is OpKind.LOCAL_GATE:
                (qpu,) = op.qpus
                self.data_free[qpu] = self.emit(op, self.data_free[qpu])
            else:
                raise SchedulingError(f"unexpected op {op}")
        leftover = [e for e, v in pairs.items() if v]
        if leftover or arrived:
            raise SchedulingError(f"stranded entanglement on {leftover or list(arrived)}")

    def _edge_free(self, i: int, k: int) -> int:
        return max(self.slot_free[CommSlot(i, "R", k)], self.slot_free[CommSlot(i + 1, "L", k)])

    @staticmethod
    def _take(pairs, a: int, b: int, op: DistributedOp):
        key = (min(a, b), max(a, b))
        if not pairs[key]:
            raise SchedulingError(f"no end-to-end Bell pair between QPUs {a} and {b} for {op}")
        return pairs[key].pop(0)


def schedule(
    ops_by_front_layer: Sequence[Sequence[DistributedOp]],
    topology: Topology,
    costs: Costs = UNIT_COSTS,
    **meta,
) -> CompiledProgram:
    """ASAP list scheduling of lowered front layers.

    Primitives are placed in emission order. Data slots are used in that order,
    so per-qubit program order survives; communication slots are held from
    link generation until the Bell pair is consumed. Link entanglement may start
    as soon as its slots are free, ahead of the data qubits becoming available.

    ``meta`` fills the descriptive fields of :class:`CompiledProgram`
    (``n``, ``strategy``, ``source``, ``final_assignment``, ...).
    """
    tl = _Timeline(topology)
    for idx, ops in enumerate(ops_by_front_layer):
        tl.front_layer = idx
        for bundle in _bundles(list(ops)):
            tl.place(bundle)
    depth = max((s.end for s in tl.out), default=0)
    meta.setdefault("n", topology.n_logical)
    meta.setdefault("initial_assignment", topology.assignment)
    meta.setdefault("final_assignment", topology.assignment)
    meta.setdefault("front_layers", len(ops_by_front_layer))
    return CompiledProgram(
        tuple(tl.out),
        depth,
        qpu_count=topology.qpu_count,
        epr_capacity=topology.epr_capacity,
        costs=costs,
        **meta,
    )


@dataclass(frozen=True)
class Metrics:
    depth: int = 0
    link_generation_layers: int = 0
    epr_pairs: int = 0
    remote_cnots: int = 0
    swaps_performed: int = 0
    cnot_derived_layers: int = 0

    def __post_init__(self):
        assert self.link_generation_layers <= self.depth
        assert self.epr_pairs >= self.remote_cnots


def measure(p: CompiledProgram) -> Metrics:
    """Count depth, link-only layers, Bell pairs and CNOT-derived layers.

    A layer is CNOT-derived when any op other than a pass-through local gate
    is active in it.
    """
    link_only = derived = 0
    for layer in p.active():
        kinds = {s.kind for s in layer}
        if kinds == {OpKind.LINK}:
            link_only += 1
        if kinds - {OpKind.LOCAL_GATE}:
            derived += 1
    return Metrics(
        depth=p.depth,
        link_generation_layers=link_only,
        epr_pairs=sum(1 for s in p.ops if s.kind is OpKind.LINK),
        remote_cnots=sum(1 for s in p.ops if s.kind is OpKind.REMOTE_CNOT),
        swaps_performed=p.swaps_performed,
        cnot_derived_layers=derived,
    )


def link_rounds(p: CompiledProgram) -> dict[int, int]:
    """Distinct link-generation start layers per front layer."""
    starts: dict[int, set[int]] = defaultdict(set)
    for s in p.ops:
        if s.kind is OpKind.LINK:
            starts[s.front_layer].add(s.start)
    return {fl: len(ts) for fl, ts in sorted(starts.items())}


def front_layer_spans(p: CompiledProgram) -> dict[int, int]:
    """Number of distinct layers occupied by each front layer's distributed ops."""
    occupied: dict[int, set[int]] = defaultdict(set)
    for s in p.ops:
        if s.kind is not OpKind.LOCAL_GATE:
            occupied[s.front_layer].update(range(s.start, s.end))
    return {fl: len(ts) for fl, ts in sorted(occupied.items())}


# --------------------------------------------------------------------------
# Analytical bounds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n: int
    cnot_layers: int
    c_le: int
    c_bsm: int
    c_cx: int
    d_es: int
    d_qs: int
    d_qs_prime: int
    es_bound: int
    dqs_bound: int
    compiled: dict = field(default_factory=dict)

    def bound_for(self, strategy: Strategy | str) -> int:
        return self.es_bound if Strategy(strategy) is Strategy.ES else self.dqs_bound

    def ratio(self, strategy: Strategy | str, compiled_layers: int | None = None) -> float:
        if compiled_layers is None:
            compiled_layers = self.compiled[Strategy(strategy).value]
        bound = self.bound_for(strategy)
        if bound == 0:
            return 0.0 if compiled_layers == 0 else float("inf")
        return compiled_layers / bound


def bounds(n: int, cnot_layers: int, costs: Costs = UNIT_COSTS) -> BoundReport:
    """Worst-case compiled depth of ``cnot_layers`` CNOT layers on ``n`` qubits.

    Per layer: ``n/2 * d_es`` for entanglement swapping and
    ``n/4 * d_qs + d'_qs`` for data-qubit swapping, with the qubit fractions
    rounded down (a layer holds at most ``n // 2`` CNOTs).
    """
    if n < 2:
        raise ValueError("bounds need n >= 2")
    if cnot_layers < 0:
        raise ValueError("cnot_layers must be non-negative")
    d_es = costs.c_le + costs.c_bsm + costs.c_cx
    d_qs = 3 * d_es
    d_qs_prime = costs.c_le + costs.c_cx
    return BoundReport(
        n=n,
        cnot_layers=cnot_layers,
        c_le=costs.c_le,
        c_bsm=costs.c_bsm,
        c_cx=costs.c_cx,
        d_es=d_es,
        d_qs=d_qs,
        d_qs_prime=d_qs_prime,
        es_bound=cnot_layers * (n // 2) * d_es,
        dqs_bound=cnot_layers * ((n // 4) * d_qs + d_qs_prime),
    )


def sorting_network_depth(n: int) -> int:
    """Depth of an insertion/bubble sorting network on ``n`` wires."""
    if n < 2:
        raise ValueError("a sorting network needs n >= 2")
    return 2 * n - 3
