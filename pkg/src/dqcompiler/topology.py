"""Linear nearest-neighbour QPU chain with one data qubit per QPU."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class TopologyError(ValueError):
    pass


class CommSlot(NamedTuple):
    """A communication qubit: ``side`` is the link it serves ('L' or 'R')."""

    qpu: int
    side: str
    index: int

    def __str__(self) -> str:
        return f"{self.side}{self.qpu}.{self.index}"


@dataclass(frozen=True)
class Qpu:
    id: int
    data_qubit: int | None
    comm_qubits: tuple[CommSlot, ...]


@dataclass(frozen=True)
class Topology:
    """Immutable snapshot of the chain and of the logical-to-QPU placement.

    ``assignment[q]`` is the QPU holding logical qubit ``q``. QPUs beyond the
    logical qubit count sit unused at the right end of the chain.
    """

    qpu_count: int
    epr_capacity: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        if self.qpu_count < 2:
            raise TopologyError(f"a linear topology needs at least 2 QPUs, got {self.qpu_count}")
        if self.epr_capacity not in (1, 2):
            raise TopologyError(f"epr_capacity must be 1 or 2, got {self.epr_capacity}")
        if len(self.assignment) > self.qpu_count:
            raise TopologyError(
                f"{len(self.assignment)} logical qubits do not fit on {self.qpu_count} QPUs"
            )
        if len(set(self.assignment)) != len(self.assignment) or any(
            not 0 <= p < self.qpu_count for p in self.assignment
        ):
            raise TopologyError(f"assignment {self.assignment} is not injective onto the chain")

    @property
    def n_logical(self) -> int:
        return len(self.assignment)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(self.qpu_count - 1)]

    def comm_slots(self, qpu: int) -> tuple[CommSlot, ...]:
        slots = []
        if qpu > 0:
            slots += [CommSlot(qpu, "L", k) for k in range(self.epr_capacity)]
        if qpu < self.qpu_count - 1:
            slots += [CommSlot(qpu, "R", k) for k in range(self.epr_capacity)]
        return tuple(slots)

    @property
    def comm_qubit_count(self) -> int:
        return 2 * self.epr_capacity * (self.qpu_count - 1)

    @property
    def qpus(self) -> tuple[Qpu, ...]:
        inverse = self.inverse()
        return tuple(Qpu(i, inverse[i], self.comm_slots(i)) for i in range(self.qpu_count))

    def inverse(self) -> list[int | None]:
        """QPU index -> logical qubit (None for an empty data slot)."""
        inv: list[int | None] = [None] * self.qpu_count
        for q, p in enumerate(self.assignment):
            inv[p] = q
        return inv

    def qpu_of(self, q: int) -> int:
        if not 0 <= q < len(self.assignment):
            raise TopologyError(f"logical qubit {q} is not assigned")
        return self.assignment[q]

    def adjacent(self, a: int, b: int) -> bool:
        return abs(self.qpu_of(a) - self.qpu_of(b)) == 1

    def summary(self) -> str:
        return f"linear qpus={self.qpu_count} epr_capacity={self.epr_capacity}"


def build_linear(n_qpus: int, epr_capacity: int = 1, n_logical: int | None = None) -> Topology:
    """Chain of ``n_qpus`` QPUs with identity placement of ``n_logical`` qubits."""
    if n_qpus < 2:
        raise TopologyError(f"a linear topology needs at least 2 QPUs, got {n_qpus}")
    if n_logical is None:
        n_logical = n_qpus
    return Topology(n_qpus, epr_capacity, tuple(range(n_logical)))


def hop_distance(t: Topology, a: int, b: int) -> int:
    if a == b:
        raise TopologyError("hop distance needs two distinct logical qubits")
    return abs(t.qpu_of(a) - t.qpu_of(b))


def apply_swap(t: Topology, a: int, b: int) -> Topology:
    """Exchange the QPUs of logical qubits ``a`` and ``b``."""
    pa, pb = t.qpu_of(a), t.qpu_of(b)
    assignment = list(t.assignment)
    assignment[a], assignment[b] = pb, pa
    return Topology(t.qpu_count, t.epr_capacity, tuple(assignment))
