"""Regenerate the bundled benchmark corpus.

The circuits are synthesized from their textbook constructions with fixed
seeds, so the output is byte-stable. ``manifest.json`` records, per circuit,
its size and the CNOT-layer count measured by an independent DAG longest-path
computation (networkx), plus the reference bound values for circuits whose
size and CNOT-layer count match the published benchmark.

    python scripts/generate_corpus.py [--out src/dqcompiler/corpus]
"""

from __future__ import annotations

import argparse
import json
import math
import random
from pathlib import Path

import networkx as nx

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

# name -> (n, cnot_layers, es_bound, dqs_bound) of the reference benchmark rows
REFERENCE = {
    "ghz_4": (4, 3, 18, 33),
    "ghz_20": (20, 19, 570, 893),
    "ising_model_16": (16, 20, 480, 760),
    "adder": (10, 55, 825, 1100),
    "H2_RYRZ": (4, 25, 150, 275),
    "LiH_RYRZ": (12, 105, 1890, 3045),
    "H2O_RYRZ": (14, 125, 2625, 3625),
    "Random_20q_RYRZ": (20, 185, 5550, 8695),
    "random1_n5_d5": (5, 15, 90, 165),
    "random2_n16_d16": (16, 48, 1152, 1824),
}


class Builder:
    def __init__(self, n: int, cregs: bool = False):
        self.n = n
        self.lines = [HEADER, f"qreg q[{n}];\n"]
        if cregs:
            self.lines.append(f"creg c[{n}];\n")

    def g(self, name: str, *qubits: int, params: tuple[float, ...] = ()) -> None:
        args = ",".join(f"q[{q}]" for q in qubits)
        if params:
            name += "(" + ",".join(f"{p:.6f}" for p in params) + ")"
        self.lines.append(f"{name} {args};\n")

    def barrier(self) -> None:
        self.lines.append("barrier q;\n")

    def ccx(self, a: int, b: int, c: int) -> None:
        # standard Clifford+T expansion
        for name, *qs in [
            ("h", c), ("cx", b, c), ("tdg", c), ("cx", a, c), ("t", c), ("cx", b, c),
            ("tdg", c), ("cx", a, c), ("t", b), ("t", c), ("h", c), ("cx", a, b),
            ("t", a), ("tdg", b), ("cx", a, b),
        ]:  # fmt: skip
            self.g(name, *qs)

    def text(self) -> str:
        return "".join(self.lines)


def ghz(n: int) -> str:
    b = Builder(n, cregs=True)
    b.g("h", 0)
    for i in range(n - 1):
        b.g("cx", i, i + 1)
    for i in range(n):
        b.lines.append(f"measure q[{i}] -> c[{i}];\n")
    return b.text()


def ising(n: int, steps: int, seed: int) -> str:
    rng = random.Random(seed)
    b = Builder(n)
    for q in range(n):
        b.g("h", q)
    for _ in range(steps):
        for start in (0, 1):
            for i in range(start, n - 1, 2):
                b.g("cx", i, i + 1)
                b.g("rz", i + 1, params=(rng.uniform(0, math.pi),))
                b.g("cx", i, i + 1)
        for q in range(n):
            b.g("rx", q, params=(rng.uniform(0, math.pi),))
    return b.text()


def ryrz(n: int, reps: int, seed: int) -> str:
    rng = random.Random(seed)
    b = Builder(n)

    def rotations():
        for q in range(n):
            b.g("ry", q, params=(rng.uniform(-math.pi, math.pi),))
            b.g("rz", q, params=(rng.uniform(-math.pi, math.pi),))

    rotations()
    for _ in range(reps):
        b.barrier()
        for i in range(n):
            for j in range(i + 1, n):
                b.g("cx", i, j)
        b.barrier()
        rotations()
    return b.text()


def cuccaro_adder(bits: int) -> str:
    n = 2 * bits + 2
    cin, a, bq, cout = 0, list(range(1, bits + 1)), list(range(bits + 1, 2 * bits + 1)), n - 1
    b = Builder(n)
    for q in a + bq:
        if q % 3 == 0:
            b.g("x", q)

    def maj(x, y, z):
        b.g("cx", z, y)
        b.g("cx", z, x)
        b.ccx(x, y, z)

    def uma(x, y, z):
        b.ccx(x, y, z)
        b.g("cx", z, x)
        b.g("cx", x, y)

    carry = [cin] + a[:-1]
    for i in range(bits):
        maj(carry[i], bq[i], a[i])
    b.g("cx", a[-1], cout)
    for i in reversed(range(bits)):
        uma(carry[i], bq[i], a[i])
    return b.text()


def random_circuit(n: int, depth: int, seed: int) -> str:
    """Random one-qubit layer, then three CNOTs on each of n//2 random pairs, per step."""
    rng = random.Random(seed)
    b = Builder(n)
    for _ in range(depth):
        for q in range(n):
            name = rng.choice(["h", "t", "s", "x", "rz"])
            b.g(name, q, params=(rng.uniform(0, 2 * math.pi),) if name == "rz" else ())
        order = list(range(n))
        rng.shuffle(order)
        for k in range(0, n - 1, 2):
            c, t = order[k], order[k + 1]
            b.g("cx", c, t)
            b.g("cx", t, c)
            b.g("cx", c, t)
    return b.text()


def qft(n: int) -> str:
    b = Builder(n)
    for i in range(n):
        b.g("h", i)
        for j in range(i + 1, n):
            lam = math.pi / 2 ** (j - i)
            # controlled phase j -> i
            b.g("u1", j, params=(lam / 2,))
            b.g("cx", j, i)
            b.g("u1", i, params=(-lam / 2,))
            b.g("cx", j, i)
            b.g("u1", i, params=(lam / 2,))
    for i in range(n // 2):
        b.g("cx", i, n - 1 - i)
        b.g("cx", n - 1 - i, i)
        b.g("cx", i, n - 1 - i)
    return b.text()


CIRCUITS = {
    "ghz_4": lambda: ghz(4),
    "ghz_20": lambda: ghz(20),
    "ising_model_16": lambda: ising(16, 5, seed=16),
    "adder": lambda: cuccaro_adder(4),
    "H2_RYRZ": lambda: ryrz(4, 5, seed=2),
    "LiH_RYRZ": lambda: ryrz(12, 5, seed=12),
    "H2O_RYRZ": lambda: ryrz(14, 5, seed=14),
    "Random_20q_RYRZ": lambda: ryrz(20, 5, seed=20),
    "random1_n5_d5": lambda: random_circuit(5, 5, seed=1),
    "random2_n16_d16": lambda: random_circuit(16, 16, seed=2),
    "qft_16": lambda: qft(16),
}


def oracle_cnot_layers(text: str) -> tuple[int, int, int, int]:
    """(n, gate count, CNOT layers, pure CNOT layers) from a DAG built off the text.

    Each statement is a node; an edge joins consecutive statements on a qubit.
    Barriers span the whole register and are zero-width nodes. A gate's layer
    is its longest weighted path from the start; CNOT layers are the distinct
    layers holding a cx, pure ones those holding nothing else.
    """
    dag = nx.DiGraph()
    last: dict[int, int] = {}
    n = 0
    kinds = {}
    for idx, stmt in enumerate(s.strip() for s in text.split(";")):
        if stmt.startswith("qreg"):
            n = int(stmt.split("[")[1].split("]")[0])
            continue
        if not stmt or stmt.split()[0] in ("OPENQASM", "include", "creg"):
            continue
        name = stmt.split()[0].split("(")[0]
        if name == "barrier":
            qubits = list(range(n))
        else:
            qubits = [int(tok.split("]")[0]) for tok in stmt.split("q[")[1:]]
        kinds[idx] = name
        dag.add_node(idx)
        for q in qubits:
            if q in last:
                dag.add_edge(last[q], idx)
            last[q] = idx
    level = {}
    for node in nx.topological_sort(dag):
        level[node] = max(
            (level[p] + (kinds[p] != "barrier") for p in dag.predecessors(node)), default=0
        )
    real = [v for v in dag if kinds[v] != "barrier"]
    layers = {level[v] for v in real if kinds[v] == "cx"}
    mixed = {level[v] for v in real if kinds[v] != "cx"}
    return n, len(real), len(layers), len(layers - mixed)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=Path(__file__).resolve().parents[1] / "src/dqcompiler/corpus")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for name, make in CIRCUITS.items():
        text = make()
        (out / f"{name}.qasm").write_text(text)
        n, gates, layers, pure = oracle_cnot_layers(text)
        entry = {"file": f"{name}.qasm", "n": n, "gates": gates, "cnots": text.count("\ncx "),
                 "cnot_layers": layers, "cnot_layers_pure": pure}  # fmt: skip
        ref = REFERENCE.get(name)
        if ref and ref[0] == n and ref[1] in (layers, pure):
            rule = "any" if ref[1] == layers else "pure"
            entry["reference"] = {"rule": rule, "es_bound": ref[2], "dqs_bound": ref[3]}
        manifest[name] = entry
        print(f"{name:18} n={n:3} cnot_layers={layers:5} pure={pure:5} reference={'reference' in entry}")
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
