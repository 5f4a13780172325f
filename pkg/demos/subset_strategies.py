"""
Commuting-subset strategies for Be2
===================================

Grouping the 62 Be2 terms one per subset, by smallest-last colouring, or
all together changes how long one Trotter step is as a circuit and as a
measurement pattern.
"""

from mbqspat.circuit import circuit_depth
from mbqspat.fixtures import be2
from mbqspat.pipeline import trotter_step

h = be2()
print(h.name, h.n_q, "qubits,", h.n_s, "terms")

print(f"{'strategy':>14} {'n_ss':>5} {'depth':>6} {'n':>6} {'n_l':>5} {'non-Pauli':>10} {'max subset n_l':>15}")
for strategy in ("one-to-one", "smallest-last", "full"):
    step = trotter_step(h, strategy, workers=1)
    m = step.metrics
    worst = max(a.metrics.n_l for a in step.subsets)
    print(f"{strategy:>14} {step.partition.n_ss:>5} {circuit_depth(step.circuit):>6} {m.n:>6} {m.n_l:>5} {m.n_non_pauli:>10} {worst:>15}")

# every strategy needs the same number of non-Pauli measurements here, one
# per non-identity term, while larger subsets trade many short patterns for
# a few deep ones
