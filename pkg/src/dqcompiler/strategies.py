"""Lowering of front layers into entanglement-mediated primitives.

Two strategies are available. ``ES`` routes every CNOT in place through a chain
of link entanglements collapsed by one entanglement swap. ``DQS`` first moves
data qubits (SortPairs) so that every CNOT of the layer joins neighbouring
QPUs, then issues the remote CNOTs; idle QPUs between partners are bridged by
entanglement swapping.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Sequence

from .circuit import FrontLayer, Gate
from .topology import Topology, TopologyError, apply_swap

DUMMY = -1


class Strategy(str, Enum):
    ES = "es"
    DQS = "dqs"


class OpKind(str, Enum):
    LINK = "link_entanglement"
    ENT_SWAP = "entanglement_swap"
    REMOTE_CNOT = "remote_cnot"
    TELEPORT = "teleport"
    LOCAL_SWAP = "local_swap"
    LOCAL_GATE = "local_gate"


@dataclass(frozen=True)
class Costs:
    """Layer costs of link entanglement, entanglement swapping and remote CNOT."""

    c_le: int = 1
    c_bsm: int = 1
    c_cx: int = 1

    def __post_init__(self):
        for name in ("c_le", "c_bsm", "c_cx"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


UNIT_COSTS = Costs()


@dataclass(frozen=True)
class DistributedOp:
    """One lowered primitive.

    ``qpus`` by kind: LINK ``(i, i+1)``; ENT_SWAP the whole chain, ascending;
    REMOTE_CNOT ``(control qpu, target qpu)``; TELEPORT ``(source, destination)``;
    LOCAL_SWAP and LOCAL_GATE ``(qpu,)``. ``qubits`` holds the logical qubits
    touched and ``seq`` the source gate position when the op realizes a gate of
    the input circuit.
    """

    kind: OpKind
    qpus: tuple[int, ...]
    qubits: tuple[int, ...] = ()
    cost_layers: int = 1
    seq: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind is OpKind.LINK and (
            len(self.qpus) != 2 or self.qpus[1] - self.qpus[0] != 1
        ):
            raise ValueError(f"link entanglement must join adjacent QPUs, got {self.qpus}")
        if self.kind is OpKind.ENT_SWAP and (
            len(self.qpus) < 3
            or any(b - a != 1 for a, b in zip(self.qpus, self.qpus[1:]))
        ):
            raise ValueError(f"entanglement swap needs a contiguous chain, got {self.qpus}")

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.qpus[0], self.qpus[-1]

    @property
    def intermediates(self) -> tuple[int, ...]:
        return self.qpus[1:-1] if self.kind is OpKind.ENT_SWAP else ()


def local_gate(gate: Gate, qpu: int) -> DistributedOp:
    return DistributedOp(OpKind.LOCAL_GATE, (qpu,), gate.qubits, 1, gate.seq, str(gate))


# --------------------------------------------------------------------------
# SortPairs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SwapPlan:
    """Position swaps over the interactions vector, grouped by sorting cycle.

    Swaps inside one step touch disjoint, non-overlapping spans of the vector
    and can run simultaneously.
    """

    steps: tuple[tuple[tuple[int, int], ...], ...]
    cycles: int
    length: int
    padded: bool

    @property
    def swaps(self) -> list[tuple[int, int]]:
        return [s for step in self.steps for s in step]

    @property
    def step_count(self) -> int:
        return sum(1 for step in self.steps if step)

    def apply(self, vector: Sequence[Hashable]) -> list[Hashable]:
        v = list(vector)
        if len(v) < self.length:
            v += [DUMMY] * (self.length - len(v))
        for a, b in self.swaps:
            v[a], v[b] = v[b], v[a]
        return v


class MalformedLayerError(ValueError):
    pass


def _first_repeat(v: list, mask: list[int]) -> tuple[int, int] | None:
    """(first, second) mask-relative indices of the earliest completed pair."""
    seen: dict = {}
    for rel, pos in enumerate(mask):
        val = v[pos]
        if val in seen:
            return seen[val], rel
        seen[val] = rel
    return None


def _swap(v: list, a: int, b: int, step: list[tuple[int, int]]) -> None:
    v[a], v[b] = v[b], v[a]
    step.append((min(a, b), max(a, b)))


def _resolve(v: list, mask: list[int], step: list[tuple[int, int]]) -> None:
    hit = _first_repeat(v, mask)
    if hit is None:
        raise MalformedLayerError("no completed pair in half; interactions vector is inconsistent")
    first, last = hit
    partner = last ^ 1
    if partner != first:
        _swap(v, mask[partner], mask[first], step)
    for rel in sorted((partner, last), reverse=True):
        del mask[rel]


def sort_pairs(interactions: Sequence[Hashable]) -> SwapPlan:
    """Plan data-qubit swaps so the two occurrences of every label become adjacent.

    ``interactions`` lists, in chain order, the CNOT label of every participating
    qubit. The vector is padded with a dummy pair to a multiple of four and split
    into two halves; each of the ``len/4`` cycles completes one pair per half by
    moving the first element of the earliest completed pair next to its partner.
    When the left half holds no completed pair (every pair straddles the halves),
    its last element is first swapped across the boundary into the aligned slot
    beside its partner, which completes one pair on each side.
    """
    counts = Counter(interactions)
    bad = {lab: c for lab, c in counts.items() if c != 2 or lab == DUMMY}
    if bad:
        raise MalformedLayerError(f"every label must appear exactly twice; offending: {bad}")
    v = list(interactions)
    padded = len(v) % 4 != 0
    if padded:
        v += [DUMMY, DUMMY]
    n = len(v)
    mask1 = list(range(n // 2))
    mask2 = list(range(n // 2, n))
    steps = []
    for _ in range(n // 4):
        step: list[tuple[int, int]] = []
        if _first_repeat(v, mask1) is None:
            end = mask1[-1]
            rel = next(r for r, pos in enumerate(mask2) if v[pos] == v[end])
            _swap(v, end, mask2[rel ^ 1], step)
        _resolve(v, mask1, step)
        _resolve(v, mask2, step)
        steps.append(tuple(step))
    return SwapPlan(tuple(steps), n // 4, n, padded)


# --------------------------------------------------------------------------
# Primitive emitters
# --------------------------------------------------------------------------


def _entangle_path(lo: int, hi: int, costs: Costs, copies: int = 1) -> list[DistributedOp]:
    ops = []
    for i in range(lo, hi):
        ops += [DistributedOp(OpKind.LINK, (i, i + 1), cost_layers=costs.c_le)] * copies
    if hi - lo > 1:
        chain = tuple(range(lo, hi + 1))
        ops += [DistributedOp(OpKind.ENT_SWAP, chain, cost_layers=costs.c_bsm)] * copies
    return ops


def emit_remote_cnot(
    control: int,
    target: int,
    t: Topology,
    costs: Costs = UNIT_COSTS,
    seq: int | None = None,
) -> list[DistributedOp]:
    """Link entanglement on every edge between the two QPUs, one entanglement
    swap when they are not neighbours, then the remote CNOT."""
    qc, qt = t.qpu_of(control), t.qpu_of(target)
    if qc == qt:
        raise TopologyError(f"q{control} and q{target} share QPU {qc}")
    ops = _entangle_path(min(qc, qt), max(qc, qt), costs)
    ops.append(
        DistributedOp(OpKind.REMOTE_CNOT, (qc, qt), (control, target), costs.c_cx, seq)
    )
    return ops


def emit_data_swap(
    a: int, b: int, t: Topology, costs: Costs = UNIT_COSTS
) -> tuple[list[DistributedOp], Topology]:
    """Exchange the data of logical qubits ``a`` and ``b``.

    With one EPR pair per link this is three remote CNOTs. With two, both Bell
    pairs are built along the path at once, each data state is teleported into
    a communication qubit on the opposite QPU and a local swap stores it in the
    data slot.

    Returns:
        The ops and the topology with ``a`` and ``b`` exchanged.
    """
    if a == b:
        return [], t
    pa, pb = t.qpu_of(a), t.qpu_of(b)
    if t.epr_capacity == 1:
        ops = (
            emit_remote_cnot(a, b, t, costs)
            + emit_remote_cnot(b, a, t, costs)
            + emit_remote_cnot(a, b, t, costs)
        )
    else:
        ops = _entangle_path(min(pa, pb), max(pa, pb), costs, copies=2)
        ops += [
            DistributedOp(OpKind.TELEPORT, (pa, pb), (a,)),
            DistributedOp(OpKind.TELEPORT, (pb, pa), (b,)),
            DistributedOp(OpKind.LOCAL_SWAP, (pb,), (a,)),
            DistributedOp(OpKind.LOCAL_SWAP, (pa,), (b,)),
        ]
    return ops, apply_swap(t, a, b)


def interactions_vector(front: FrontLayer, t: Topology) -> tuple[list[int], list[int]]:
    """Chain positions of the layer's participants and their pair labels.

    Labels are 1-based and numbered by first appearance from the left.
    """
    owner = {}
    for idx, g in enumerate(front.cnots):
        for q in g.qubits:
            owner[t.qpu_of(q)] = idx
    positions = sorted(owner)
    relabel: dict[int, int] = {}
    labels = []
    for p in positions:
        labels.append(relabel.setdefault(owner[p], len(relabel) + 1))
    return positions, labels


@dataclass
class LayerLowering:
    ops: list[DistributedOp]
    topology: Topology
    plan: SwapPlan | None = None
    swaps: list[tuple[int, int]] = field(default_factory=list)


def compile_front_layer(
    front: FrontLayer,
    t: Topology,
    strategy: Strategy | str,
    costs: Costs = UNIT_COSTS,
) -> LayerLowering:
    """Lower the CNOTs of one front layer.

    CNOTs are issued left to right by their leftmost QPU. For ``DQS`` the
    planned swaps come first, realized step by step against the evolving
    placement; the swapped logical pairs are reported in ``swaps``.
    """
    strategy = Strategy(strategy)
    ops: list[DistributedOp] = []
    plan = None
    swapped: list[tuple[int, int]] = []
    if strategy is Strategy.DQS and front.cnots:
        positions, labels = interactions_vector(front, t)
        plan = sort_pairs(labels)
        for a_pos, b_pos in plan.swaps:
            inverse = t.inverse()
            qa, qb = inverse[positions[a_pos]], inverse[positions[b_pos]]
            swap_ops, t = emit_data_swap(qa, qb, t, costs)
            ops += swap_ops
            swapped.append((qa, qb))
    for g in sorted(front.cnots, key=lambda g: min(t.qpu_of(q) for q in g.qubits)):
        ops += emit_remote_cnot(g.control, g.target, t, costs, seq=g.seq)
    return LayerLowering(ops, t, plan, swapped)
