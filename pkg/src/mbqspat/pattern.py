"""Measurement-calculus patterns.

Commands run left to right.  A measurement ``M(i, plane, angle, s, t)``
applies ``X**s_i`` and ``Z**t_i`` to node ``i`` (``s_i``, ``t_i`` being the
parities of the listed outcomes) and then measures it in the basis of
``plane`` at ``angle``; outcome 0 is the ``+`` eigenvector::

    XY: (|0> + e^{i a}|1>)/sqrt2      Bloch (cos a, sin a, 0)
    YZ: cos(a/2)|0> + i sin(a/2)|1>   Bloch (0, sin a, cos a)
    XZ: cos(a/2)|0> + sin(a/2)|1>     Bloch (sin a, 0, cos a)

In the XY plane this is the usual rule ``a -> (-1)**s a + t pi``.

Domains are tuples with set semantics (a repeated signal cancels); the tuple
order only records how a domain was written so text round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .angle import ZERO, AngleExpr

PLANES = ("XY", "YZ", "XZ")


class PatternError(ValueError):
    """Raised for ill-formed patterns."""


def xor_domain(a: Sequence[int], *others: Iterable[int]) -> tuple[int, ...]:
    """Symmetric difference that keeps first-seen order."""
    out = dict.fromkeys(a)
    for b in others:
        for x in b:
            if x in out:
                del out[x]
            else:
                out[x] = None
    return tuple(out)


def canonical_domain(d: Iterable[int]) -> tuple[int, ...]:
    return xor_domain((), d)


@dataclass(frozen=True)
class N:
    node: int


@dataclass(frozen=True)
class E:
    nodes: tuple[int, int]

    def __post_init__(self) -> None:
        if self.nodes[0] == self.nodes[1]:
            raise PatternError(f"self-loop E({self.nodes[0]},{self.nodes[1]})")


@dataclass(frozen=True)
class M:
    node: int
    plane: str = "XY"
    angle: AngleExpr = ZERO
    s_domain: tuple[int, ...] = ()
    t_domain: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.plane not in PLANES:
            raise PatternError(f"unknown measurement plane {self.plane!r}")
        object.__setattr__(self, "angle", AngleExpr.coerce(self.angle))
        object.__setattr__(self, "s_domain", tuple(self.s_domain))
        object.__setattr__(self, "t_domain", tuple(self.t_domain))


@dataclass(frozen=True)
class X:
    node: int
    domain: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))


@dataclass(frozen=True)
class Z:
    node: int
    domain: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))


@dataclass(frozen=True)
class S:
    """Signal shift: from here on, ``s_node`` reads as ``s_node + sum(domain)``."""

    node: int
    domain: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))


@dataclass(frozen=True)
class C:
    """Unconditional single-qubit Clifford on an output node (compactified patterns only).

    ``name`` is a gate word over ``{H, S}`` read left to right in time order;
    ``""`` is the identity.
    """

    node: int
    name: str


Command = Union[N, E, M, X, Z, S, C]


def _nodes_of(cmd: Command) -> tuple[int, ...]:
    if isinstance(cmd, E):
        return cmd.nodes
    return (cmd.node,)


def _domains_of(cmd: Command) -> tuple[int, ...]:
    if isinstance(cmd, M):
        return cmd.s_domain + cmd.t_domain
    if isinstance(cmd, (X, Z, S)):
        return cmd.domain
    return ()


@dataclass(frozen=True)
class OpenGraph:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    adjacency: dict[int, frozenset[int]] = field(compare=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        adj: dict[int, set[int]] = {v: set() for v in self.nodes}
        for a, b in self.edges:
            if a == b or a not in adj or b not in adj:
                raise PatternError(f"bad edge ({a},{b})")
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "adjacency", {v: frozenset(nb) for v, nb in adj.items()})
        if not set(self.inputs) <= set(self.nodes) or not set(self.outputs) <= set(self.nodes):
            raise PatternError("inputs/outputs must be graph nodes")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], inputs: Sequence[int] = (), outputs: Sequence[int] = (), nodes: Iterable[int] = ()) -> OpenGraph:
        es = frozenset((min(a, b), max(a, b)) for a, b in edges)
        ns = set(nodes) | set(inputs) | set(outputs) | {v for e in es for v in e}
        return cls(tuple(sorted(ns)), es, tuple(inputs), tuple(outputs))

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def n_e(self) -> int:
        return len(self.edges)

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adjacency.values()), default=0)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class Pattern:
    """A command sequence acting on ``input_nodes`` and leaving ``output_nodes``.

    Inputs are never declared with ``N``.  The order of ``output_nodes``
    fixes the qubit order of the output state.
    """

    input_nodes: tuple[int, ...]
    output_nodes: tuple[int, ...]
    commands: tuple[Command, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_nodes", tuple(self.input_nodes))
        object.__setattr__(self, "output_nodes", tuple(self.output_nodes))
        object.__setattr__(self, "commands", tuple(self.commands))
        self.check()

    # -- well-formedness -----------------------------------------------------

    def check(self) -> None:
        """Raise :class:`PatternError` unless the pattern is well formed."""
        if len(set(self.input_nodes)) != len(self.input_nodes):
            raise PatternError("duplicate input node")
        if len(set(self.output_nodes)) != len(self.output_nodes):
            raise PatternError("duplicate output node")
        live = set(self.input_nodes)
        declared = set(self.input_nodes)
        measured: set[int] = set()
        for pos, cmd in enumerate(self.commands):
            if isinstance(cmd, N):
                if cmd.node in declared:
                    raise PatternError(f"node {cmd.node} prepared twice (command {pos})")
                declared.add(cmd.node)
                live.add(cmd.node)
                continue
            for v in _nodes_of(cmd):
                if v not in declared:
                    raise PatternError(f"command {pos} uses undeclared node {v}")
                if v in measured:
                    raise PatternError(f"command {pos} acts on node {v} after its measurement")
            for d in _domains_of(cmd):
                if d not in measured:
                    raise PatternError(f"command {pos} depends on node {d}, which is not measured earlier")
            if isinstance(cmd, M):
                if cmd.node in self.output_nodes:
                    raise PatternError(f"output node {cmd.node} is measured")
                measured.add(cmd.node)
                live.discard(cmd.node)
        if live != set(self.output_nodes):
            missing = sorted(live - set(self.output_nodes))
            extra = sorted(set(self.output_nodes) - live)
            raise PatternError(f"unmeasured non-output nodes {missing}; outputs not live {extra}")

    # -- views ---------------------------------------------------------------

    def __iter__(self) -> Iterator[Command]:
        return iter(self.commands)

    def __len__(self) -> int:
        return len(self.commands)

    @property
    def nodes(self) -> tuple[int, ...]:
        out = list(self.input_nodes)
        out += [c.node for c in self.commands if isinstance(c, N)]
        return tuple(out)

    @property
    def width(self) -> int:
        return len(self.input_nodes)

    def measurements(self) -> list[M]:
        return [c for c in self.commands if isinstance(c, M)]

    def measurement_order(self) -> list[int]:
        return [c.node for c in self.commands if isinstance(c, M)]

    def measurement_of(self, node: int) -> M:
        for c in self.commands:
            if isinstance(c, M) and c.node == node:
                return c
        raise KeyError(node)

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges after cancelling repeated ``E`` commands, in first-seen order."""
        seen: dict[tuple[int, int], tuple[int, int]] = {}
        for c in self.commands:
            if isinstance(c, E):
                key = (min(c.nodes), max(c.nodes))
                if key in seen:
                    del seen[key]
                else:
                    seen[key] = c.nodes
        return list(seen.values())

    @property
    def symbols(self) -> set[int]:
        return {s for c in self.commands if isinstance(c, M) for s in c.angle.symbols}

    def is_standard(self) -> bool:
        """N* E* M* then corrections (X, Z, C)."""
        rank = {N: 0, E: 1, M: 2, S: 2, X: 3, Z: 3, C: 4}
        ranks = [rank[type(c)] for c in self.commands]
        return ranks == sorted(ranks)

    def is_shifted(self) -> bool:
        return all(not (isinstance(c, M) and c.plane == "XY" and c.t_domain) for c in self.commands) and not any(
            isinstance(c, S) for c in self.commands
        )

    def relabel(self, mapping: Mapping[int, int]) -> Pattern:
        f = lambda v: mapping.get(v, v)  # noqa: E731
        return Pattern(
            tuple(map(f, self.input_nodes)),
            tuple(map(f, self.output_nodes)),
            tuple(_relabel_cmd(c, f) for c in self.commands),
        )

    def relabel_dense(self) -> Pattern:
        """Renumber nodes ``0..n-1`` keeping inputs first and declaration order."""
        mapping = {v: k for k, v in enumerate(self.nodes)}
        return self.relabel(mapping)

    def canonical(self) -> tuple:
        """Order-insensitive summary used for structural comparison.

        Domains compare as sets; corrections compare per node as (kind, set)
        multisets, since X and Z commute up to a global phase.
        """
        edges = frozenset(frozenset(e) for e in self.edge_list())
        meas = tuple(
            (c.node, c.plane, c.angle, frozenset(canonical_domain(c.s_domain)), frozenset(canonical_domain(c.t_domain)))
            for c in self.commands
            if isinstance(c, M)
        )
        corr = sorted(
            (type(c).__name__, c.node, tuple(sorted(canonical_domain(c.domain))) if not isinstance(c, C) else c.name)
            for c in self.commands
            if isinstance(c, (X, Z, C))
        )
        return (self.input_nodes, self.output_nodes, frozenset(self.nodes), edges, meas, tuple(corr))


def _relabel_cmd(c: Command, f) -> Command:
    if isinstance(c, N):
        return N(f(c.node))
    if isinstance(c, E):
        return E((f(c.nodes[0]), f(c.nodes[1])))
    if isinstance(c, M):
        return replace(c, node=f(c.node), s_domain=tuple(map(f, c.s_domain)), t_domain=tuple(map(f, c.t_domain)))
    if isinstance(c, C):
        return C(f(c.node), c.name)
    return type(c)(f(c.node), tuple(map(f, c.domain)))


# -- rewriting -----------------------------------------------------------------


def standardize(p: Pattern) -> Pattern:
    """Bring ``p`` to N-E-M-corrections order.

    Pending corrections are pushed to the right:

    * ``X_i^s`` followed by ``E(i,j)`` leaves ``Z_j^s`` behind as well;
    * ``Z_i^s`` commutes with ``E``;
    * corrections reaching ``M_i`` fold into its s/t domains.

    Corrections left on outputs are emitted Z-first, each kind in
    output-node order.
    """
    preps: list[Command] = []
    edges: list[Command] = []
    meas: list[Command] = []
    pend_x: dict[int, tuple[int, ...]] = {}
    pend_z: dict[int, tuple[int, ...]] = {}
    cliffords: list[C] = []
    for cmd in p.commands:
        if isinstance(cmd, N):
            preps.append(cmd)
        elif isinstance(cmd, E):
            i, j = cmd.nodes
            if pend_x.get(i):
                pend_z[j] = xor_domain(pend_z.get(j, ()), pend_x[i])
            if pend_x.get(j):
                pend_z[i] = xor_domain(pend_z.get(i, ()), pend_x[j])
            edges.append(cmd)
        elif isinstance(cmd, M):
            v = cmd.node
            s_dom = xor_domain(cmd.s_domain, pend_x.pop(v, ()))
            t_dom = xor_domain(cmd.t_domain, pend_z.pop(v, ()))
            meas.append(replace(cmd, s_domain=s_dom, t_domain=t_dom))
        elif isinstance(cmd, X):
            pend_x[cmd.node] = xor_domain(pend_x.get(cmd.node, ()), cmd.domain)
        elif isinstance(cmd, Z):
            pend_z[cmd.node] = xor_domain(pend_z.get(cmd.node, ()), cmd.domain)
        elif isinstance(cmd, S):
            meas.append(cmd)
        elif isinstance(cmd, C):
            if pend_x.get(cmd.node) or pend_z.get(cmd.node):
                raise PatternError("cannot standardize a Clifford command that follows corrections")
            cliffords.append(cmd)
        else:  # pragma: no cover
            raise PatternError(f"unknown command {cmd!r}")
    corrections: list[Command] = []
    for v in p.output_nodes:
        if pend_z.get(v):
            corrections.append(Z(v, pend_z[v]))
    for v in p.output_nodes:
        if pend_x.get(v):
            corrections.append(X(v, pend_x[v]))
    return Pattern(p.input_nodes, p.output_nodes, tuple(preps + edges + meas + corrections + cliffords))


def shift_signals(p: Pattern) -> Pattern:
    """Remove XY-plane t-domains.

    Measuring at ``a + t pi`` instead of ``a`` only flips the outcome, so the
    t-domain is dropped and later reads of ``s_i`` become ``s_i + t``.  Other
    planes keep their t-domains (a Z there is not a pure outcome flip).
    """
    subst: dict[int, tuple[int, ...]] = {}

    def sub(dom: Sequence[int]) -> tuple[int, ...]:
        hits = [subst[v] for v in dom if v in subst]
        return xor_domain(dom, *hits) if hits else tuple(dom)

    cmds: list[Command] = []
    for cmd in p.commands:
        if isinstance(cmd, M):
            s_dom, t_dom = sub(cmd.s_domain), sub(cmd.t_domain)
            if cmd.plane == "XY" and t_dom:
                subst[cmd.node] = t_dom
                t_dom = ()
            cmds.append(replace(cmd, s_domain=s_dom, t_domain=t_dom))
        elif isinstance(cmd, S):
            subst[cmd.node] = xor_domain(subst.get(cmd.node, ()), sub(cmd.domain))
        elif isinstance(cmd, (X, Z)):
            dom = sub(cmd.domain)
            if dom:
                cmds.append(type(cmd)(cmd.node, dom))
        else:
            cmds.append(cmd)
    return Pattern(p.input_nodes, p.output_nodes, tuple(cmds))


def normalize(p: Pattern) -> Pattern:
    return shift_signals(standardize(p))


def _append(first: Pattern, second: Pattern) -> Pattern:
    if len(first.output_nodes) != len(second.input_nodes):
        raise PatternError(f"arity mismatch: {len(first.output_nodes)} outputs vs {len(second.input_nodes)} inputs")
    mapping = dict(zip(second.input_nodes, first.output_nodes))
    base = max(first.nodes, default=-1) + 1
    fresh = [v for v in second.nodes if v not in mapping]
    for k, v in enumerate(fresh):
        mapping[v] = base + k
    moved = second.relabel(mapping)
    return Pattern(first.input_nodes, moved.output_nodes, first.commands + moved.commands)


def concat(first: Pattern, second: Pattern) -> Pattern:
    """``second`` after ``first``: second's inputs are identified with first's outputs.

    Second's remaining nodes are renumbered, in declaration order, above
    the largest node id of ``first``.  The result is standardized and
    signal-shifted.
    """
    return normalize(_append(first, second))


def concat_all(patterns: Sequence[Pattern]) -> Pattern:
    """Left-to-right concatenation, normalized once at the end."""
    if not patterns:
        raise PatternError("nothing to concatenate")
    out = patterns[0]
    for p in patterns[1:]:
        out = _append(out, p)
    return normalize(out)


def graph_of(p: Pattern) -> OpenGraph:
    return OpenGraph.from_edges(p.edge_list(), p.input_nodes, p.output_nodes, p.nodes)


def identity_pattern(width: int) -> Pattern:
    nodes = tuple(range(width))
    return Pattern(nodes, nodes, ())


def five_node_identity() -> Pattern:
    """Teleportation of one qubit along a 5-node chain."""
    return Pattern(
        (0,),
        (4,),
        (
            N(1), N(2), N(3), N(4),
            E((0, 1)), E((1, 2)), E((2, 3)), E((3, 4)),
            M(0), M(1), M(2, s_domain=(1,)), M(3),
            Z(4, (0, 2)), X(4, (1, 3)),
        ),
    )  # fmt: skip


def three_node_identity() -> Pattern:
    return Pattern(
        (0,),
        (2,),
        (N(1), N(2), E((0, 1)), E((1, 2)), M(0), M(1), X(2, (1,)), Z(2, (0,))),
    )
