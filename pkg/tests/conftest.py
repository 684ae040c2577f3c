import json
import random
from pathlib import Path

import pytest

from dqcompiler import parse_file
from dqcompiler.circuit import Circuit, cx
from dqcompiler.cli import bundled_corpus

CORPUS = bundled_corpus()
MANIFEST = json.loads((CORPUS / "manifest.json").read_text())

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): primary acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _acceptance[marker.args[0]] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, (status, detail) in sorted(_acceptance.items()):
        terminalreporter.write_line(f"[{status}] {label}" + (f" :: {detail}" if detail else ""))


@pytest.fixture(scope="session")
def corpus() -> dict[str, Circuit]:
    return {name: parse_file(CORPUS / e["file"]) for name, e in sorted(MANIFEST.items())}


def matching_circuit(labels, rng: random.Random | None = None) -> Circuit:
    """One CNOT per label pair, positions taken as qubit indices."""
    where: dict = {}
    for pos, lab in enumerate(labels):
        where.setdefault(lab, []).append(pos)
    gates = []
    for a, b in where.values():
        if rng is not None and rng.random() < 0.5:
            a, b = b, a
        gates.append(cx(a, b))
    return Circuit.from_gates(len(labels), gates)


def perfect_matchings(n: int):
    """Every pairing of range(n), as label vectors numbered by first appearance."""

    def rec(free):
        if not free:
            yield []
            return
        first, rest = free[0], free[1:]
        for i, other in enumerate(rest):
            for tail in rec(rest[:i] + rest[i + 1 :]):
                yield [(first, other)] + tail

    for pairs in rec(list(range(n))):
        v = [0] * n
        for lab, (a, b) in enumerate(sorted(pairs), start=1):
            v[a] = v[b] = lab
        yield v


def random_matching(n: int, rng: random.Random) -> list[int]:
    order = list(range(n))
    rng.shuffle(order)
    v = [0] * n
    for lab in range(n // 2):
        v[order[2 * lab]] = v[order[2 * lab + 1]] = lab + 1
    return v
