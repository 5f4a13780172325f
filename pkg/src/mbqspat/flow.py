"""Causal flow, maximally delayed layering and pattern metrics.

Layers count from the output side: outputs sit in layer 0 and a node in
layer ``k`` may only be measured after every node in layers ``> k``.

Metric names follow the usual catalogue:

======  ==========================================================
n       number of nodes
n_e     number of edges
m_d     maximum vertex degree
n_P     Pauli measurements (XY plane, angle a multiple of pi/2)
m_w     maximum number of nodes sharing a layer
n_l     number of layers
m_ld    maximum layer distance spanned by an edge
======  ==========================================================

``m_w`` counts every node of a layer, outputs included, so a pattern made
of ``w`` teleportation wires has ``m_w == w``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .pattern import M, OpenGraph, Pattern, X, Z, graph_of


@dataclass(frozen=True)
class FlowLayering:
    """Successor map ``f`` and node layers; ``n_l`` is the number of distinct layers."""

    successor: dict[int, int]
    layer: dict[int, int]

    @property
    def n_l(self) -> int:
        return len(set(self.layer.values()))

    def nodes_in_layer(self, k: int) -> list[int]:
        return sorted(v for v, lv in self.layer.items() if lv == k)


def find_causal_flow(g: OpenGraph) -> FlowLayering | None:
    """Maximally delayed causal flow, or ``None`` if the open graph has none.

    Layers are peeled backwards from the outputs.  Each round, a
    "corrector" ``v`` (a node already placed, not an input) whose
    neighbourhood has exactly one unplaced node ``u`` takes it as
    ``f(u) = v``.  The result has the minimum number of layers among causal
    flows of ``g``.
    """
    nodes = set(g.nodes)
    inputs = set(g.inputs)
    placed = set(g.outputs)
    layer = {v: 0 for v in g.outputs}
    successor: dict[int, int] = {}
    correctors = placed - inputs
    k = 1
    while True:
        new_placed: set[int] = set()
        used: set[int] = set()
        for v in sorted(correctors):
            rest = g.neighbors(v) - placed
            if len(rest) != 1:
                continue
            (u,) = rest
            if u in new_placed:
                continue
            successor[u] = v
            layer[u] = k
            new_placed.add(u)
            used.add(v)
        if not new_placed:
            break
        placed |= new_placed
        correctors = (correctors - used) | (new_placed - inputs)
        k += 1
    if placed != nodes:
        return None
    return FlowLayering(successor, layer)


def check_causal_flow(g: OpenGraph, fl: FlowLayering) -> list[str]:
    """Re-verify the causal-flow conditions; an empty list means valid.

    With ``i < j`` meaning ``layer(i) > layer(j)``:

    * ``f(i)`` is a neighbour of ``i`` and not an input, ``f`` is injective;
    * ``i < f(i)``;
    * every other neighbour ``k`` of ``f(i)`` satisfies ``i < k``.
    """
    bad = []
    outputs = set(g.outputs)
    measured = set(g.nodes) - outputs
    if set(fl.successor) != measured:
        bad.append("successor map is not defined exactly on the measured nodes")
    if set(fl.layer) != set(g.nodes):
        bad.append("layer map does not cover the graph")
        return bad
    if any(fl.layer[v] != 0 for v in outputs):
        bad.append("outputs are not in layer 0")
    if len(set(fl.successor.values())) != len(fl.successor):
        bad.append("successor map is not injective")
    for i, fi in fl.successor.items():
        if fi not in g.neighbors(i):
            bad.append(f"f({i})={fi} is not a neighbour")
        if fi in g.inputs:
            bad.append(f"f({i})={fi} is an input")
        if not fl.layer[i] > fl.layer[fi]:
            bad.append(f"{i} is not before f({i})={fi}")
        for k in g.neighbors(fi):
            if k != i and not fl.layer[i] > fl.layer[k]:
                bad.append(f"neighbour {k} of f({i})={fi} is not after {i}")
    return bad


def dependency_layering(p: Pattern) -> dict[int, int]:
    """Layers from signal dependencies alone, counted from the outputs.

    Used when a pattern has no causal flow (e.g. after compactification):
    a measured node sits one layer above everything that reads its outcome.
    """
    layer = {v: 0 for v in p.output_nodes}
    readers: dict[int, list[int]] = {}
    order = []
    for c in p.commands:
        if isinstance(c, M):
            order.append(c.node)
            for d in c.s_domain + c.t_domain:
                readers.setdefault(d, []).append(c.node)
        elif isinstance(c, (X, Z)):
            for d in c.domain:
                readers.setdefault(d, []).append(c.node)
    for v in reversed(order):
        layer[v] = 1 + max((layer[r] for r in readers.get(v, ())), default=0)
    return layer


@dataclass(frozen=True)
class Metrics:
    n: int
    n_e: int
    m_d: int
    n_P: int
    m_w: int
    n_l: int
    m_ld: int
    n_px: int = 0
    n_py: int = 0
    n_meas: int = 0

    @property
    def n_non_pauli(self) -> int:
        return self.n_meas - self.n_P

    def as_dict(self) -> dict:
        return asdict(self)


def pauli_counts(p: Pattern, exclude_outputs: bool = True) -> tuple[int, int]:
    """Numbers of Pauli-X and Pauli-Y measurements (XY plane only)."""
    nx = ny = 0
    for c in p.commands:
        if isinstance(c, M) and c.plane == "XY":
            axis = c.angle.pauli_axis()
            nx += axis == "X"
            ny += axis == "Y"
    return nx, ny


def compute_metrics(p: Pattern, fl: FlowLayering | dict[int, int] | None = None) -> Metrics:
    """Catalogue metrics of ``p``.

    ``fl`` defaults to the maximally delayed causal flow, falling back to
    :func:`dependency_layering` when none exists.  A bare layer map is
    accepted too.
    """
    g = graph_of(p)
    if fl is None:
        fl = find_causal_flow(g) if g.outputs else None
    layer = fl.layer if isinstance(fl, FlowLayering) else fl
    if layer is None:
        layer = dependency_layering(p)
    nx, ny = pauli_counts(p)
    widths: dict[int, int] = {}
    for v in g.nodes:
        widths[layer[v]] = widths.get(layer[v], 0) + 1
    m_ld = max((abs(layer[a] - layer[b]) for a, b in g.edges), default=0)
    return Metrics(
        n=g.n,
        n_e=g.n_e,
        m_d=g.max_degree(),
        n_P=nx + ny,
        m_w=max(widths.values(), default=0),
        n_l=len(widths),
        m_ld=m_ld,
        n_px=nx,
        n_py=ny,
        n_meas=len(p.measurements()),
    )


def pattern_metrics(p: Pattern) -> Metrics:
    return compute_metrics(p)
