"""
One Be2 subset, from library entry to compact pattern
=====================================================

The Be2 one-to-one entry for subset 32 implements exp(-i c P) with
P = IXYYXI.  We recompute its meta block, simulate it against the dense
exponential and then strip its Pauli measurements.
"""

import numpy as np

from mbqspat.compactify import eliminate_pauli_measurements, lc_gain_bound
from mbqspat.fixtures import BE2_SUBSET32_COEFFICIENT, subset32_entry
from mbqspat.flow import compute_metrics
from mbqspat.io import LibraryEntry, check_entry
from mbqspat.pauli import parse_pauli, pauli_exponential
from mbqspat.sim import Random, fidelity, random_state, simulate_pattern

entry = LibraryEntry.from_json(subset32_entry())
p = entry.pattern()
print("stored meta agrees with recomputation:", check_entry(entry) == [])
print(compute_metrics(p))

# c[32] is bound at simulation time; the pattern stores it symbolically
binding = {32: BE2_SUBSET32_COEFFICIENT}
u = pauli_exponential(parse_pauli("IXYYXI"), BE2_SUBSET32_COEFFICIENT)
psi = random_state(6, np.random.default_rng(1))
run = simulate_pattern(p, psi, Random(5), binding)
print("fidelity to dense exponential:", fidelity(run.state, u @ psi))
print("peak simultaneous qubits:", run.max_live)

# Pauli measurements can be removed with graph-state rules
small, report = eliminate_pauli_measurements(p)
print("upper bound on removable nodes:", lc_gain_bound(p))
print(report.summary())
run = simulate_pattern(small, psi, Random(5), binding)
print("fidelity after compactification:", fidelity(run.state, u @ psi))
