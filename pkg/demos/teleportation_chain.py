"""
Teleportation along a five-node chain
=====================================

A one-qubit identity written as a measurement pattern, its causal flow,
its metrics, and the two-node shortcut obtained by wire contraction.
"""

import numpy as np

from mbqspat.compactify import contract_wire_x_pairs
from mbqspat.flow import compute_metrics, find_causal_flow
from mbqspat.io import print_pattern_ascii
from mbqspat.pattern import five_node_identity, graph_of
from mbqspat.sim import Random, fidelity, random_state, simulate_pattern

p = five_node_identity()
print(print_pattern_ascii(p))

# layers are counted from the output, which sits in layer 0
fl = find_causal_flow(graph_of(p))
print("layers:", fl.layer)
print(compute_metrics(p))

# whatever the outcomes, the input state comes out unchanged
rng = np.random.default_rng(0)
for seed in range(3):
    psi = random_state(1, rng)
    run = simulate_pattern(p, psi, Random(seed))
    print(run.outcomes, "fidelity", round(fidelity(run.state, psi), 12))

# two zero-angle measurements in the middle of the wire cancel out
short, report = contract_wire_x_pairs(p)
print(report.summary())
print(print_pattern_ascii(short))
