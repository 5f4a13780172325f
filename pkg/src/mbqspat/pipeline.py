"""End-to-end generation: Hamiltonian -> subsets -> circuits -> patterns -> library.

Per-subset work fans out to a process pool when more than one worker is
requested (``MBQSPAT_WORKERS``); results are always merged in subset order,
so output does not depend on the worker count.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io as _io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .circuit import Circuit, circuit_depth, concat_circuits, optimize, synth_subset_circuit
from .flow import Metrics, compute_metrics, find_causal_flow
from .grouping import Strategy, SubsetPartition, group
from .io import LibraryEntry, LibraryFile, make_entry
from .pattern import Pattern, concat_all, graph_of
from .pauli import Hamiltonian
from .transpile import circuit_to_pattern

WORKERS_ENV = "MBQSPAT_WORKERS"


def worker_count(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, default)))
    except ValueError:
        return default


@dataclass
class SubsetArtifact:
    index: int
    terms: tuple[int, ...]
    circuit: Circuit
    pattern: Pattern
    metrics: Metrics
    depth: int


def build_subset(h: Hamiltonian, partition: SubsetPartition, ell: int, opt_level: int = 1) -> SubsetArtifact:
    circ = optimize(synth_subset_circuit(h, partition, ell), opt_level)
    pat = circuit_to_pattern(circ)
    return SubsetArtifact(ell, partition.subsets[ell], circ, pat, compute_metrics(pat), circuit_depth(circ))


def _build_one(args) -> SubsetArtifact:
    return build_subset(*args)


def build_subsets(h: Hamiltonian, partition: SubsetPartition, opt_level: int = 1, workers: int | None = None) -> list[SubsetArtifact]:
    workers = worker_count() if workers is None else workers
    jobs = [(h, partition, ell, opt_level) for ell in range(partition.n_ss)]
    if workers <= 1 or len(jobs) < 2:
        return [_build_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_build_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass
class TrotterStep:
    strategy: Strategy
    partition: SubsetPartition
    subsets: list[SubsetArtifact]
    circuit: Circuit
    pattern: Pattern

    @property
    def metrics(self) -> Metrics:
        return compute_metrics(self.pattern)


def trotter_step(
    h: Hamiltonian,
    strategy: str | Strategy,
    ordering: Sequence[int] | None = None,
    opt_level: int = 1,
    tie_break: str = "reference",
    workers: int | None = None,
) -> TrotterStep:
    """One Trotter step as concatenated subset circuits and patterns."""
    part = group(h, strategy, ordering=ordering, tie_break=tie_break)
    arts = build_subsets(h, part, opt_level, workers)
    circ = concat_circuits((a.circuit for a in arts), h.n_q)
    pat = concat_all([a.pattern for a in arts])
    return TrotterStep(part.strategy, part, arts, circ, pat)


def library(
    h: Hamiltonian,
    partition: SubsetPartition,
    artifacts: Sequence[SubsetArtifact],
    instance: str = "",
    opt_level: int = 1,
    seed: int | None = None,
) -> LibraryFile:
    header = {
        "Hamiltonian": h.name,
        "instance": instance,
        "n_qubits": h.n_q,
        "terms": [[t.index, t.coefficient, str(t.pauli)] for t in h.terms],
        "strategy": partition.strategy.value,
        "subsets": {str(k): [str(h[s].pauli) for s in sub] for k, sub in enumerate(partition.subsets)},
        "subset_indices": {str(k): list(sub) for k, sub in enumerate(partition.subsets)},
        "provenance": {
            "tool": "mbqspat",
            "version": __version__,
            "strategy": partition.strategy.value,
            "optimization_level": opt_level,
            "seed": seed,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
        "summary": summary_block(artifacts),
    }
    entries = [make_entry(a.index, a.pattern) for a in artifacts]
    return LibraryFile(header, entries)


def summary_block(artifacts: Sequence[SubsetArtifact]) -> dict:
    ms = [a.metrics for a in artifacts]
    if not ms:
        return {}
    return {
        "number of subsets": len(ms),
        "max node number": max(m.n for m in ms),
        "total node number": sum(m.n for m in ms),
        "max degree": max(m.m_d for m in ms),
        "max layers (causal flow)": max(m.n_l for m in ms),
        "max edge layer span": max(m.m_ld for m in ms),
        "total Pauli measurements": sum(m.n_P for m in ms),
        "total non-Pauli measurements": sum(m.n_non_pauli for m in ms),
        "max circuit depth": max(a.depth for a in artifacts),
    }


def entry_ok(entry: LibraryEntry) -> bool:
    return find_causal_flow(graph_of(entry.pattern())) is not None


METRIC_COLUMNS = ("n", "n_e", "m_d", "n_P", "n_px", "n_py", "n_meas", "m_w", "n_l", "m_ld", "depth")


def metrics_csv(rows: Sequence[tuple[str, int, SubsetArtifact]]) -> str:
    """CSV of per-subset metrics; each row is ``(label, subset index, artifact)``."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("label", "subset", "size") + METRIC_COLUMNS)
    for label, ell, a in rows:
        m = a.metrics.as_dict()
        m["depth"] = a.depth
        w.writerow((label, ell, len(a.terms)) + tuple(m[k] for k in METRIC_COLUMNS))
    return buf.getvalue()
