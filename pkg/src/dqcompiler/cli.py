"""Batch command line driver: ``dqcompile [options] INPUT...``.

Each input is a ``.qasm`` file or a directory of them. Every circuit is
compiled independently; the listing goes to ``<out>/<name>.dqc.txt`` and one
record per circuit, in input order, to ``<out>/report.json`` or
``<out>/report.csv``.

Exit status: 0 when every circuit compiled with ratio <= 1, 1 when a circuit
failed to parse or exceeded its bound, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .circuit import CNOT_LAYER_RULES, cnot_layer_count
from .pipeline import compile_circuit
from .qasm import QasmError, parse, serialize
from .scheduler import bounds, measure
from .strategies import Costs, Strategy

# mirrors the reference table: circuit, size, CNOT layers, then per strategy
# theoretical bound, compiled layers and their ratio
FIELDS = (
    "name", "n", "cnot_layers", "cnot_layer_rule", "strategy", "epr_capacity",
    "bound", "compiled_layers", "ratio", "total_layers", "link_generation_layers",
    "epr_pairs", "remote_cnots", "swaps_performed", "wall_ms",
)  # fmt: skip


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[Path, ...]
    strategy: Strategy = Strategy.ES
    epr_capacity: int = 1
    costs: Costs = Costs()
    cnot_layer_rule: str = "any"
    output_dir: Path = Path("dqc_out")
    report_format: str = "json"
    timing: bool = False


def bundled_corpus() -> Path:
    return Path(str(resources.files("dqcompiler") / "corpus"))


def collect_inputs(paths) -> list[Path]:
    """Expand directories to their sorted ``.qasm`` files.

    Raises:
        FileNotFoundError: for a missing path or an empty directory.
    """
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            found = sorted(p.glob("*.qasm"))
            if not found:
                raise FileNotFoundError(f"{p}: no .qasm files")
            files += found
        elif p.is_file():
            files.append(p)
        else:
            raise FileNotFoundError(f"{p}: no such file or directory")
    return files


def compile_one(path: Path, cfg: RunConfig) -> tuple[dict | None, str, str]:
    """Compile one file; returns (record, listing, diagnostic)."""
    try:
        circuit = parse(path.read_text(), str(path))
    except QasmError as e:
        return None, "", str(e)
    t0 = time.perf_counter()
    program = compile_circuit(circuit, cfg.strategy, cfg.epr_capacity, cfg.costs, name=path.stem)
    wall_ms = (time.perf_counter() - t0) * 1000
    m = measure(program)
    layers = cnot_layer_count(circuit, cfg.cnot_layer_rule)
    b = bounds(max(circuit.n, 2), layers, cfg.costs)
    bound = b.bound_for(cfg.strategy)
    record = {
        "name": path.stem,
        "n": circuit.n,
        "cnot_layers": layers,
        "cnot_layer_rule": cfg.cnot_layer_rule,
        "strategy": cfg.strategy.value,
        "epr_capacity": cfg.epr_capacity,
        "bound": bound,
        f"{cfg.strategy.value}_bound": bound,
        "compiled_layers": m.cnot_derived_layers,
        "ratio": round(b.ratio(cfg.strategy, m.cnot_derived_layers), 6),
        "total_layers": m.depth,
        "link_generation_layers": m.link_generation_layers,
        "epr_pairs": m.epr_pairs,
        "remote_cnots": m.remote_cnots,
        "swaps_performed": m.swaps_performed,
        "wall_ms": round(wall_ms, 3) if cfg.timing else None,
    }
    return record, serialize(program), ""


def _threads(jobs: int) -> int:
    raw = os.environ.get("DQC_THREADS", "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        cap = 1
    return max(1, min(cap, jobs))


def render_report(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


def run(cfg: RunConfig, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        files = collect_inputs(cfg.inputs)
    except FileNotFoundError as e:
        print(f"dqcompile: error: {e}", file=stderr)
        return 2
    names = [f.stem for f in files]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        print(f"dqcompile: error: duplicate circuit names {dupes}", file=stderr)
        return 2

    workers = _threads(len(files))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(compile_one, files, [cfg] * len(files)))
    else:
        results = [compile_one(f, cfg) for f in files]

    status = 0
    records = []
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        for path, (record, listing, diag) in zip(files, results):
            if record is None:
                print(diag, file=stderr)
                status = 1
                continue
            (cfg.output_dir / f"{path.stem}.dqc.txt").write_text(listing)
            records.append(record)
            if record["ratio"] > 1:
                print(
                    f"dqcompile: {record['name']}: {record['compiled_layers']} compiled layers "
                    f"exceed the {cfg.strategy.value} bound {record['bound']}",
                    file=stderr,
                )
                status = 1
        report = cfg.output_dir / f"report.{cfg.report_format}"
        report.write_text(render_report(records, cfg.report_format))
    except OSError as e:
        print(f"dqcompile: error: {e}", file=stderr)
        return 2
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dqcompile",
        description="Compile OpenQASM 2.0 circuits onto a linear chain of single-qubit QPUs.",
    )
    ap.add_argument("inputs", nargs="*", type=Path, help=".qasm files or directories")
    ap.add_argument("--corpus", action="store_true", help="add the bundled benchmark corpus")
    ap.add_argument("--strategy", choices=[s.value for s in Strategy], default="es")
    ap.add_argument("--epr-capacity", type=int, choices=(1, 2), default=1)
    ap.add_argument("--c-le", type=int, default=1, metavar="N", help="link entanglement layers")
    ap.add_argument("--c-bsm", type=int, default=1, metavar="N", help="entanglement swap layers")
    ap.add_argument("--c-cx", type=int, default=1, metavar="N", help="remote CNOT layers")
    ap.add_argument("--cnot-layer-rule", choices=CNOT_LAYER_RULES, default="any")
    ap.add_argument("--report", choices=("json", "csv"), default="json")
    ap.add_argument("--out", type=Path, default=Path("dqc_out"), help="output directory")
    ap.add_argument(
        "--timing", action="store_true", help="record wall_ms (makes reports run-dependent)"
    )
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    inputs = list(args.inputs) + ([bundled_corpus()] if args.corpus else [])
    if not inputs:
        ap.error("no inputs given (pass files, directories or --corpus)")
    try:
        costs = Costs(args.c_le, args.c_bsm, args.c_cx)
    except ValueError as e:
        ap.error(str(e))
    cfg = RunConfig(
        inputs=tuple(inputs),
        strategy=Strategy(args.strategy),
        epr_capacity=args.epr_capacity,
        costs=costs,
        cnot_layer_rule=args.cnot_layer_rule,
        output_dir=args.out,
        report_format=args.report,
        timing=args.timing,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
