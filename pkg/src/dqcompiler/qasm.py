"""OpenQASM 2.0 subset reader and compiled-program writer.

Accepted: the header, ``include``, ``qreg``/``creg``, the one-qubit gates of
``qelib1.inc`` (plus ``U``), ``cx``/``CX``, ``measure`` and ``barrier``.
Registers are flattened to one index space in declaration order. Anything that
would need multi-qubit decomposition or classical control is rejected with a
diagnostic pointing at the offending statement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .circuit import Circuit, Gate, GateKind
from .scheduler import CompiledProgram

ONE_QUBIT_PARAMS = {
    "id": 0, "x": 0, "y": 0, "z": 0, "h": 0, "s": 0, "sdg": 0, "t": 0, "tdg": 0,
    "rx": 1, "ry": 1, "rz": 1, "u1": 1, "u2": 2, "u3": 3, "U": 3,
}  # fmt: skip
UNSUPPORTED = ("gate", "opaque", "if", "reset")

_IDENT = r"[a-zA-Z_][a-zA-Z0-9_]*"
_ARG = re.compile(rf"^\s*({_IDENT})\s*(?:\[\s*(\d+)\s*\])?\s*$")
_DECL = re.compile(rf"^(qreg|creg)\s+({_IDENT})\s*\[\s*(\d+)\s*\]$")
_CALL = re.compile(rf"^({_IDENT})\s*(?:\((.*)\))?\s*(.*)$", re.S)
_MEASURE = re.compile(r"^measure\s+(.+?)\s*->\s*(.+)$", re.S)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class QasmError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic], origin: str = "<qasm>"):
        self.diagnostics = diagnostics
        self.origin = origin
        super().__init__("\n".join(f"{origin}:{d}" for d in diagnostics))


def _strip_comments(text: str) -> str:
    # keep newlines so line numbers survive
    text = re.sub(r"/\*.*?\*/", lambda m: re.sub(r"[^\n]", " ", m.group()), text, flags=re.S)
    return re.sub(r"//[^\n]*", lambda m: " " * len(m.group()), text)


def _statements(text: str):
    """Yield (statement, line, column) for every ';'-terminated statement."""
    line, col = 1, 1
    start = None
    buf = []
    for ch in text:
        if start is None and not ch.isspace():
            start = (line, col)
        if ch == ";":
            if start is not None:
                yield "".join(buf).strip(), start[0], start[1]
            buf, start = [], None
        elif start is not None:
            buf.append(ch)
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    if start is not None and "".join(buf).strip():
        yield None, start[0], start[1]


def _split_args(s: str) -> list[str]:
    """Split on top-level commas (parameters may contain nested parentheses)."""
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return parts


class _Parser:
    def __init__(self, origin: str):
        self.origin = origin
        self.diags: list[ParseDiagnostic] = []
        self.qregs: dict[str, tuple[int, int]] = {}
        self.cregs: dict[str, int] = {}
        self.nq = 0
        self.gates: list[Gate] = []

    def error(self, line: int, col: int, msg: str) -> None:
        self.diags.append(ParseDiagnostic(line, col, msg))

    def operands(self, text: str, line: int, col: int, kind: str = "qreg") -> list[list[int]] | None:
        """Resolve comma-separated operands; a bare register expands to all of it."""
        out = []
        for part in _split_args(text):
            m = _ARG.match(part)
            if not m:
                self.error(line, col, f"malformed operand {part.strip()!r}")
                return None
            reg, idx = m.group(1), m.group(2)
            if kind == "creg":
                if reg not in self.cregs:
                    self.error(line, col, f"undeclared classical register {reg!r}")
                    return None
                size = self.cregs[reg]
                if idx is not None and int(idx) >= size:
                    self.error(line, col, f"index {idx} out of range for {reg}[{size}]")
                    return None
                out.append([0] * (size if idx is None else 1))
                continue
            if reg not in self.qregs:
                self.error(line, col, f"undeclared quantum register {reg!r}")
                return None
            offset, size = self.qregs[reg]
            if idx is None:
                out.append(list(range(offset, offset + size)))
            elif int(idx) >= size:
                self.error(line, col, f"index {idx} out of range for {reg}[{size}]")
                return None
            else:
                out.append([offset + int(idx)])
        return out

    @staticmethod
    def broadcast(groups: list[list[int]]) -> list[tuple[int, ...]] | None:
        width = max(len(g) for g in groups)
        if any(len(g) not in (1, width) for g in groups):
            return None
        return [tuple(g[i] if len(g) > 1 else g[0] for g in groups) for i in range(width)]

    def add(self, kind: GateKind, name: str, qubits, params=()) -> None:
        self.gates.append(Gate(kind, name, tuple(qubits), tuple(params), seq=len(self.gates)))

    def statement(self, stmt: str, line: int, col: int) -> None:
        head = stmt.split(None, 1)[0] if stmt else ""
        head = re.match(r"[A-Za-z_][A-Za-z0-9_]*", head)
        word = head.group() if head else ""
        if word == "OPENQASM":
            if not re.fullmatch(r"OPENQASM\s+2\.0", stmt):
                self.error(line, col, f"unsupported version: {stmt!r}; expected OPENQASM 2.0")
            return
        if word == "include":
            return
        if word in ("qreg", "creg"):
            m = _DECL.match(stmt)
            if not m:
                self.error(line, col, f"malformed register declaration {stmt!r}")
                return
            _, reg, size = m.groups()
            if reg in self.qregs or reg in self.cregs:
                self.error(line, col, f"register {reg!r} declared twice")
            elif int(size) == 0:
                self.error(line, col, f"register {reg!r} has size 0")
            elif word == "qreg":
                self.qregs[reg] = (self.nq, int(size))
                self.nq += int(size)
            else:
                self.cregs[reg] = int(size)
            return
        if word in UNSUPPORTED:
            self.error(line, col, f"'{word}' statements are not supported")
            return
        if word == "measure":
            m = _MEASURE.match(stmt)
            if not m:
                self.error(line, col, "malformed measure; expected 'measure q -> c'")
                return
            qs = self.operands(m.group(1), line, col)
            cs = self.operands(m.group(2), line, col, kind="creg")
            if qs is None or cs is None:
                return
            if len(qs) != 1 or len(cs) != 1 or len(qs[0]) != len(cs[0]):
                self.error(line, col, "measure operands differ in size")
                return
            for q in qs[0]:
                self.add(GateKind.MEASURE, "measure", (q,))
            return
        if word == "barrier":
            groups = self.operands(stmt[len("barrier"):], line, col)
            if groups is not None:
                qubits = sorted({q for g in groups for q in g})
                self.add(GateKind.BARRIER, "barrier", qubits)
            return
        m = _CALL.match(stmt)
        if not m or not word:
            self.error(line, col, f"cannot parse statement {stmt!r}")
            return
        name, params, args = m.group(1), m.group(2), m.group(3)
        if name in ("cx", "CX"):
            if params is not None:
                self.error(line, col, "cx takes no parameters")
                return
            groups = self.operands(args, line, col)
            if groups is None:
                return
            if len(groups) != 2:
                self.error(line, col, f"cx expects 2 operands, got {len(groups)}")
                return
            pairs = self.broadcast(groups)
            if pairs is None:
                self.error(line, col, "cx register operands differ in size")
                return
            for c, t in pairs:
                if c == t:
                    self.error(line, col, f"cx control and target are the same qubit ({c})")
                    return
                self.add(GateKind.CNOT, "cx", (c, t))
            return
        if name not in ONE_QUBIT_PARAMS:
            self.error(line, col, f"unsupported gate {name!r}")
            return
        plist = [p.strip() for p in _split_args(params)] if params and params.strip() else []
        plist = ["".join(p.split()) for p in plist]
        if len(plist) != ONE_QUBIT_PARAMS[name]:
            self.error(
                line, col, f"{name} takes {ONE_QUBIT_PARAMS[name]} parameter(s), got {len(plist)}"
            )
            return
        groups = self.operands(args, line, col)
        if groups is None:
            return
        if len(groups) != 1:
            self.error(line, col, f"{name} acts on one qubit, got {len(groups)} operands")
            return
        for q in groups[0]:
            self.add(GateKind.ONE_QUBIT, name, (q,), plist)


def parse(text: str, origin: str = "<qasm>") -> Circuit:
    """Parse OpenQASM 2.0 source into a :class:`Circuit`.

    Raises:
        QasmError: with one diagnostic per rejected statement.
    """
    p = _Parser(origin)
    if not text.strip():
        raise QasmError([ParseDiagnostic(1, 1, "empty source")], origin)
    body = _strip_comments(text)
    for stmt, line, col in _statements(body):
        if stmt is None:
            p.error(line, col, "statement is missing its terminating ';'")
        else:
            p.statement(stmt, line, col)
    if not p.diags and p.nq == 0:
        p.error(1, 1, "no qreg declared")
    if p.diags:
        raise QasmError(p.diags, origin)
    return Circuit(p.nq, tuple(p.gates), name=Path(origin).stem if origin != "<qasm>" else "")


def parse_file(path: str | Path) -> Circuit:
    path = Path(path)
    return parse(path.read_text(), str(path))


def _op_line(s) -> str:
    op = s.op
    qpus = ",".join(str(q) for q in op.qpus)
    parts = [f"{op.kind.value:<17}", f"qpus={qpus}"]
    if op.qubits:
        parts.append("qubits=" + ",".join(f"q{q}" for q in op.qubits))
    if op.kind.value == "local_gate" and op.label:
        parts.append(f"gate={op.label.split(' ')[0]}")
    if s.slots:
        parts.append("slots=" + ",".join(str(x) for x in s.slots))
    parts.append(f"span=[{s.start},{s.end})")
    return "  " + " ".join(parts)


def serialize(p: CompiledProgram) -> str:
    """Text form of a compiled program, grouped by start layer."""
    c = p.costs
    lines = [
        f"// source: {p.source}",
        f"// strategy: {p.strategy}",
        f"// topology: {p.topology_summary()}",
        f"// costs: c_le={c.c_le} c_bsm={c.c_bsm} c_cx={c.c_cx}",
        f"// depth: {p.depth}",
    ]
    for k, layer in enumerate(p.layers):
        if not layer:
            continue
        lines.append(f"layer {k}")
        lines += [_op_line(s) for s in layer]
    return "\n".join(lines) + "\n"
