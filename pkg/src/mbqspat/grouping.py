"""Commuting-subset partitions of Hamiltonian terms.

Three strategies are supported:

``one-to-one``
    one term per subset.
``smallest-last``
    smallest-last degeneracy ordering of the anticommutation graph (bucket
    queue), then greedy colouring in reverse removal order.
``full``
    every term in a single subset.

Smallest-last ties are resolved by one of two rules: ``"lowest-index"``
pops the lowest term index from the minimum-degree bucket;
``"reference"`` takes the removal order from networkx's smallest-last
strategy, which reproduces the reference Be2 subsets (sizes 22, 10, 10,
6, 6, 4, 4).  Colour ties always go to the smallest colour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .pauli import Hamiltonian, commutes


class Strategy(str, enum.Enum):
    ONE_TO_ONE = "one-to-one"
    SMALLEST_LAST = "smallest-last"
    FULL = "full"

    @classmethod
    def parse(cls, value: str | Strategy) -> Strategy:
        if isinstance(value, Strategy):
            return value
        aliases = {"o-o": cls.ONE_TO_ONE, "oo": cls.ONE_TO_ONE, "s-l": cls.SMALLEST_LAST, "sl": cls.SMALLEST_LAST}
        key = value.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


@dataclass(frozen=True)
class SubsetPartition:
    strategy: Strategy
    subsets: tuple[tuple[int, ...], ...]
    removal_order: tuple[int, ...] = field(default=(), compare=False)

    @property
    def n_ss(self) -> int:
        return len(self.subsets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.subsets]

    def ordering(self) -> tuple[int, ...]:
        """Term order induced by concatenating the subsets."""
        return tuple(s for subset in self.subsets for s in subset)


def anticommutation_graph(h: Hamiltonian) -> dict[int, set[int]]:
    """Adjacency sets over term indices; an edge joins each anticommuting pair."""
    adj: dict[int, set[int]] = {s: set() for s in range(h.n_s)}
    strings = h.strings
    for a in range(h.n_s):
        for b in range(a + 1, h.n_s):
            if not commutes(strings[a], strings[b]):
                adj[a].add(b)
                adj[b].add(a)
    return adj


def smallest_last_order(adj: dict[int, set[int]]) -> list[int]:
    """Removal order of the smallest-last heuristic.

    A bucket queue keyed by current degree; the vertex removed at each step
    is the lowest-index vertex in the lowest non-empty bucket.
    """
    degree = {v: len(nb) for v, nb in adj.items()}
    max_deg = max(degree.values(), default=0)
    buckets: list[set[int]] = [set() for _ in range(max_deg + 1)]
    for v, d in degree.items():
        buckets[d].add(v)
    removed: set[int] = set()
    order: list[int] = []
    low = 0
    for _ in range(len(adj)):
        # a removal lowers neighbour degrees by one, so the minimum can drop by one
        low = max(low - 1, 0)
        while not buckets[low]:
            low += 1
        v = min(buckets[low])
        buckets[low].remove(v)
        removed.add(v)
        order.append(v)
        for u in adj[v]:
            if u in removed:
                continue
            d = degree[u]
            buckets[d].remove(u)
            degree[u] = d - 1
            buckets[d - 1].add(u)
    return order


def greedy_coloring(adj: dict[int, set[int]], order: Sequence[int]) -> dict[int, int]:
    """Assign each vertex, in ``order``, the smallest colour unused by coloured neighbours."""
    color: dict[int, int] = {}
    for v in order:
        taken = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return color


def reference_smallest_last_order(adj: dict[int, set[int]]) -> list[int]:
    """Removal order produced by networkx's ``strategy_smallest_last``."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(sorted(adj))
    g.add_edges_from((a, b) for a in sorted(adj) for b in sorted(adj[a]) if a < b)
    return list(nx.coloring.strategy_smallest_last(g, None))[::-1]


TIE_BREAKS = ("reference", "lowest-index")


def group(
    h: Hamiltonian,
    strategy: str | Strategy,
    ordering: Sequence[int] | None = None,
    tie_break: str = "reference",
) -> SubsetPartition:
    """Partition the terms of ``h`` into commuting subsets.

    Parameters
    ----------
    ordering : sequence of int, optional
        Global term ordering.  Subset members follow it, as do the
        one-to-one subsets.  Defaults to ascending index.
    tie_break : {"reference", "lowest-index"}
        Smallest-last tie rule; ignored by the other strategies.
    """
    strategy = Strategy.parse(strategy)
    pi = list(range(h.n_s)) if ordering is None else list(ordering)
    if sorted(pi) != list(range(h.n_s)):
        raise ValueError("ordering must be a permutation of the term indices")
    rank = {s: k for k, s in enumerate(pi)}
    if strategy is Strategy.ONE_TO_ONE:
        return SubsetPartition(strategy, tuple((s,) for s in pi))
    if strategy is Strategy.FULL:
        return SubsetPartition(strategy, (tuple(pi),))
    adj = anticommutation_graph(h)
    if tie_break == "reference":
        removal = reference_smallest_last_order(adj)
    elif tie_break == "lowest-index":
        removal = smallest_last_order(adj)
    else:
        raise ValueError(f"unknown tie_break {tie_break!r}; expected one of {TIE_BREAKS}")
    color = greedy_coloring(adj, removal[::-1])
    n_colors = max(color.values()) + 1
    subsets = tuple(tuple(sorted((s for s in color if color[s] == c), key=rank.__getitem__)) for c in range(n_colors))
    return SubsetPartition(strategy, subsets, tuple(removal))


@dataclass
class PartitionReport:
    coverage: list[str] = field(default_factory=list)
    commutation: list[str] = field(default_factory=list)
    ordering: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[str]:
        return self.coverage + self.commutation + self.ordering

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_partition(p: SubsetPartition, h: Hamiltonian, ordering: Sequence[int] | None = None) -> PartitionReport:
    """Check that ``p`` is an exact partition of ``h``'s terms.

    Pairwise commutation is checked for the commuting-subset strategies
    only; the Full strategy holds every term in one group by definition.
    """
    report = PartitionReport()
    seen: dict[int, int] = {}
    for ell, subset in enumerate(p.subsets):
        for s in subset:
            if not 0 <= s < h.n_s:
                report.coverage.append(f"subset {ell}: index {s} out of range")
            elif s in seen:
                report.coverage.append(f"index {s} in subsets {seen[s]} and {ell}")
            else:
                seen[s] = ell
    for s in range(h.n_s):
        if s not in seen:
            report.coverage.append(f"index {s} not covered")
    strings = h.strings
    for ell, subset in enumerate(p.subsets if p.strategy is not Strategy.FULL else ()):
        members = [s for s in subset if 0 <= s < h.n_s]
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if not commutes(strings[a], strings[b]):
                    report.commutation.append(f"subset {ell}: {a} ({strings[a]}) and {b} ({strings[b]}) anticommute")
    if ordering is not None:
        rank = {s: k for k, s in enumerate(ordering)}
        for ell, subset in enumerate(p.subsets):
            ranks = [rank[s] for s in subset if s in rank]
            if ranks != sorted(ranks):
                report.ordering.append(f"subset {ell} does not follow the global ordering")
    return report
