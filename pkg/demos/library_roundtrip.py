"""
Writing and checking a pattern library
======================================

Generate the smallest-last library for Be2, write it as JSON Lines, read it
back with strict meta checks, and validate each pattern against its circuit.
"""

import tempfile
from pathlib import Path

from mbqspat.fixtures import be2
from mbqspat.grouping import group
from mbqspat.io import read_library, write_library
from mbqspat.pipeline import build_subsets, library
from mbqspat.sim import determinism_check, validate_pattern_vs_circuit, validation_csv

h = be2()
part = group(h, "smallest-last")
arts = build_subsets(h, part, workers=1)
lib = library(h, part, arts, instance="Be2", seed=0)
print(lib.header["summary"])

path = Path(tempfile.mkdtemp()) / "be2_sl.jsonl"
write_library(path, lib)
back = read_library(path, strict=True)
print(len(back.entries), "entries read back from", path)

reports = []
for a in arts:
    rep = validate_pattern_vs_circuit(a.pattern, a.circuit, trials=3, seed=a.index, label=f"subset {a.index}")
    rep.passed = rep.passed and determinism_check(a.pattern, seed=a.index)
    reports.append(rep)
print(validation_csv(reports))
