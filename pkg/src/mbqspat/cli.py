"""Command-line pipeline: ``python -m mbqspat <command> ...``.

Commands
--------
ingest     summarise a Hamiltonian text file
group      partition its terms into commuting subsets
synth      write one circuit file per subset
transpile  turn a circuit file into pattern ASCII
metrics    recompute metrics for a library or pattern
validate   simulate patterns against their circuits
concat     build a one-Trotter-step pattern
compactify rewrite library entries (``wires`` or ``pauli``)
export     generate, validate and write a library file
report     metric tables as CSV

Per-subset work runs on ``$MBQSPAT_WORKERS`` processes (default 1).  The
exit status is 0 only if every validation performed passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import circuit_depth, from_qasm, optimize, synth_subset_circuit, to_qasm
from .compactify import contract_wire_x_pairs, eliminate_pauli_measurements
from .flow import compute_metrics, find_causal_flow
from .grouping import TIE_BREAKS, Strategy, SubsetPartition, group, validate_partition
from .io import LibraryEntry, LibraryFile, meta_block, print_pattern_ascii, read_library, write_library
from .pattern import graph_of
from .pauli import Hamiltonian, load_hamiltonian, parse_hamiltonian, trotter_leading_error_term, trotter_step_unitary
from .pipeline import METRIC_COLUMNS, build_subsets, library, metrics_csv, trotter_step, worker_count
from .sim import Random, determinism_check, fidelity, random_state, simulate_pattern, validate_pattern_vs_circuit, validation_csv
from .transpile import circuit_to_pattern

STRATEGIES = [s.value for s in Strategy]


def _strategy_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", default="one-to-one", choices=STRATEGIES + ["o-o", "s-l"], help="subset strategy (default: one-to-one)")
    p.add_argument("--tie-break", default="reference", choices=TIE_BREAKS, help="smallest-last tie rule (default: reference)")


def _opt_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--opt", type=int, default=1, choices=(0, 1), help="circuit optimization level (default: 1)")


def _partition(h: Hamiltonian, args) -> SubsetPartition:
    return group(h, args.strategy, tie_break=args.tie_break)


def _out(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_ingest(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    print(f"name: {h.name}")
    print(f"qubits: {h.n_q}")
    print(f"terms: {h.n_s}")
    print(f"leading Trotter error term: {trotter_leading_error_term(h):.12g}")
    return 0


def cmd_group(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    part = _partition(h, args)
    rep = validate_partition(part, h)
    doc = {"strategy": part.strategy.value, "n_ss": part.n_ss, "subsets": [list(s) for s in part.subsets]}
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
    print(f"{part.strategy.value}: {part.n_ss} subsets, sizes {part.sizes}")
    for v in rep.violations:
        print(f"violation: {v}", file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_synth(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    part = _partition(h, args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for ell in range(part.n_ss):
        circ = optimize(synth_subset_circuit(h, part, ell), args.opt)
        (out / f"subset_{ell:04d}.qasm").write_text(to_qasm(circ))
    print(f"wrote {part.n_ss} circuit files to {out}")
    return 0


def cmd_transpile(args) -> int:
    circ = from_qasm(Path(args.circuit).read_text())
    pat = circuit_to_pattern(circ)
    _out(print_pattern_ascii(pat) + "\n", args.out)
    return 0


def cmd_metrics(args) -> int:
    lib = read_library(args.library, strict=args.strict)
    print("subset," + ",".join(METRIC_COLUMNS[:-1]))
    for e in lib.entries:
        m = compute_metrics(e.pattern()).as_dict()
        print(f"{e.index}," + ",".join(str(m[k]) for k in METRIC_COLUMNS[:-1]))
    return 0


def _library_circuits(lib: LibraryFile, opt: int):
    h = parse_hamiltonian("\n".join(f"{s} {c!r} {p}" for s, c, p in lib.header["terms"]), name=lib.header.get("Hamiltonian", ""))
    subsets = [tuple(lib.header["subset_indices"][str(e.index)]) for e in lib.entries]
    return h, [optimize(synth_subset_circuit(h, subsets, k), opt) for k in range(len(subsets))]


def _validate_pairs(pairs, args) -> int:
    reports = []
    ok = True
    for label, pat, circ, check_det in pairs:
        rep = validate_pattern_vs_circuit(pat, circ, trials=args.trials, seed=args.seed, label=label)
        det = determinism_check(pat, seed=args.seed) if check_det else True
        rep.passed = rep.passed and det
        reports.append(rep)
        ok &= rep.passed
    text = validation_csv(reports)
    _out(text, getattr(args, "csv_out", None))
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} PASS", file=sys.stderr)
    return 0 if ok else 1


def cmd_validate(args) -> int:
    path = Path(args.source)
    if path.suffix == ".jsonl":
        lib = read_library(path, strict=True)
        n_q = lib.header.get("n_qubits", 0)
        if n_q > args.max_qubits:
            print(f"skipping simulation: {n_q} qubits > --max-qubits {args.max_qubits}", file=sys.stderr)
            return 0
        opt = lib.header.get("provenance", {}).get("optimization_level", 1)
        _, circs = _library_circuits(lib, opt)
        pairs = [(f"subset {e.index}", e.pattern(), c, not e.extra.get("compactified")) for e, c in zip(lib.entries, circs)]
        return _validate_pairs(pairs, args)
    h = load_hamiltonian(path)
    if h.n_q > args.max_qubits:
        print(f"skipping simulation: {h.n_q} qubits > --max-qubits {args.max_qubits}", file=sys.stderr)
        return 0
    part = _partition(h, args)
    arts = build_subsets(h, part, args.opt, worker_count())
    return _validate_pairs([(f"subset {a.index}", a.pattern, a.circuit, True) for a in arts], args)


def cmd_concat(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    step = trotter_step(h, args.strategy, opt_level=args.opt, tie_break=args.tie_break, workers=worker_count())
    m = step.metrics
    print(", ".join(f"{k}={v}" for k, v in m.as_dict().items()))
    if args.out:
        Path(args.out).write_text(print_pattern_ascii(step.pattern) + "\n")
    if h.n_q <= args.max_qubits:
        rng = np.random.default_rng(args.seed)
        u = trotter_step_unitary(h, step.partition.ordering())
        binding = {t.index: t.coefficient for t in h.terms}
        worst = 1.0
        for _ in range(args.trials):
            psi = random_state(h.n_q, rng)
            got = simulate_pattern(step.pattern, psi, Random(int(rng.integers(2**32))), binding).state
            worst = min(worst, fidelity(got, u @ psi))
        print(f"min fidelity vs dense Trotter step: {worst:.12f}")
        return 0 if worst >= 1 - 1e-8 else 1
    return 0


def cmd_compactify(args) -> int:
    lib = read_library(args.library, strict=True)
    rewrite = contract_wire_x_pairs if args.mode == "wires" else eliminate_pauli_measurements
    entries = []
    for e in lib.entries:
        pat, rep = rewrite(e.pattern())
        print(f"subset {e.index}: {rep.nodes_before} -> {rep.nodes_after} nodes ({rep.guarantee})")
        extra = dict(e.extra, compactified=True, compactification=args.mode)
        entries.append(LibraryEntry(e.index, meta_block(pat), print_pattern_ascii(pat), extra))
    header = dict(lib.header)
    header["provenance"] = dict(header.get("provenance", {}), compactification=args.mode)
    write_library(args.out, LibraryFile(header, entries))
    return 0


def cmd_export(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    part = _partition(h, args)
    arts = build_subsets(h, part, args.opt, worker_count())
    lib = library(h, part, arts, instance=args.instance, opt_level=args.opt, seed=args.seed)
    status = 0
    if h.n_q <= args.max_qubits:
        for a in arts:
            rep = validate_pattern_vs_circuit(a.pattern, a.circuit, trials=args.trials, seed=args.seed)
            if not (rep.passed and determinism_check(a.pattern, seed=args.seed)):
                print(f"subset {a.index}: validation FAILED", file=sys.stderr)
                status = 1
    for a in arts:
        if find_causal_flow(graph_of(a.pattern)) is None:
            print(f"subset {a.index}: no causal flow", file=sys.stderr)
            status = 1
    write_library(args.out, lib)
    print(f"wrote {len(lib.entries)} entries to {args.out}")
    return status


def cmd_report(args) -> int:
    h = load_hamiltonian(args.hamiltonian)
    rows = []
    summary = []
    for strat in args.strategies:
        step = trotter_step(h, strat, opt_level=args.opt, tie_break=args.tie_break, workers=worker_count())
        rows += [(step.strategy.value, a.index, a) for a in step.subsets]
        m = step.metrics
        summary.append((step.strategy.value, step.partition.n_ss, m.n, m.n_l, m.m_ld, m.n_non_pauli, circuit_depth(step.circuit),
                        max(a.metrics.n_l for a in step.subsets)))
    text = metrics_csv(rows)
    text += "\nstrategy,n_ss,step_n,step_n_l,step_m_ld,step_non_pauli,step_circuit_depth,max_subset_n_l\n"
    text += "".join(",".join(map(str, r)) + "\n" for r in summary)
    _out(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mbqspat", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="summarise a Hamiltonian file")
    p.add_argument("hamiltonian")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("group", help="commuting-subset partition")
    p.add_argument("hamiltonian")
    _strategy_args(p)
    p.add_argument("--out", help="write the partition as JSON")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("synth", help="write per-subset circuit files")
    p.add_argument("hamiltonian")
    _strategy_args(p)
    _opt_arg(p)
    p.add_argument("--out-dir", default="circuits", help="output directory (default: circuits)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("transpile", help="circuit file -> pattern ASCII")
    p.add_argument("circuit")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("metrics", help="recompute metrics of a library")
    p.add_argument("library")
    p.add_argument("--strict", action="store_true", help="fail on stored/recomputed meta mismatch")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("validate", help="simulate patterns against circuits")
    p.add_argument("source", help="Hamiltonian text file or library .jsonl")
    _strategy_args(p)
    _opt_arg(p)
    p.add_argument("--trials", type=int, default=10, help="random inputs per pattern (default: 10)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    p.add_argument("--max-qubits", type=int, default=6, help="skip simulation above this width (default: 6)")
    p.add_argument("--csv-out", help="write the CSV report here (default: stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("concat", help="one Trotter step as a single pattern")
    p.add_argument("hamiltonian")
    _strategy_args(p)
    _opt_arg(p)
    p.add_argument("--out", help="write pattern ASCII here")
    p.add_argument("--trials", type=int, default=3, help="random inputs for the dense check (default: 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-qubits", type=int, default=6, help="skip the dense check above this width (default: 6)")
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("compactify", help="rewrite library entries")
    p.add_argument("mode", choices=("wires", "pauli"))
    p.add_argument("library")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compactify)

    p = sub.add_parser("export", help="generate and write a library")
    p.add_argument("hamiltonian")
    _strategy_args(p)
    _opt_arg(p)
    p.add_argument("--out", default="library.jsonl", help="output file (default: library.jsonl)")
    p.add_argument("--instance", default="", help="instance tag stored in the header")
    p.add_argument("--trials", type=int, default=5, help="validation inputs per subset (default: 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-qubits", type=int, default=6, help="skip simulation above this width (default: 6)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", help="metric tables as CSV")
    p.add_argument("hamiltonian")
    p.add_argument("--csv", action="store_true", help="CSV output (the only format)")
    p.add_argument("--strategies", nargs="+", default=STRATEGIES, choices=STRATEGIES)
    p.add_argument("--tie-break", default="reference", choices=TIE_BREAKS)
    _opt_arg(p)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
