"""Circuit to pattern compilation, one gate fragment at a time.

Each logical qubit is a wire whose current end node carries its state.
Fragments (up to global phase; ``J(a) = H RZ(-a)`` is the one-node step
implemented by measuring the wire end at angle ``a``):

* ``H``: one new node, ``E(i,j) M_i X_j^{s_i}``.
* ``RZ(t)``: two new nodes, ``M_i^{-t}`` then ``M_a^0``, byproducts
  ``X^{s_a} Z^{s_i}`` on the new end.
* ``S``, ``Z``: ``RZ(pi/2)``, ``RZ(pi)``.
* ``X``: ``H Z H``.  ``Y``: ``Z`` then ``X``.
* ``CNOT(c,t)``: two new nodes and three edges, target measured twice at 0.
* ``SWAP``: three CNOTs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .angle import AngleExpr
from .circuit import Circuit, Gate
from .pattern import E, M, N, Pattern, X, Z, normalize

_PI_2 = AngleExpr.of_pi(Fraction(1, 2))
_PI = AngleExpr.of_pi(1)


class TranspileError(ValueError):
    pass


@dataclass(frozen=True)
class GateFragment:
    kind: str
    consumed: tuple[int, ...]
    created: tuple[int, ...]
    commands: tuple
    wire_ends: dict[int, int]

    @property
    def n_edges(self) -> int:
        return sum(isinstance(c, E) for c in self.commands)


class _Builder:
    def __init__(self, wire_ends: dict[int, int], next_node: int):
        self.ends = dict(wire_ends)
        self.next = next_node
        self.cmds: list = []
        self.created: list[int] = []

    def fresh(self) -> int:
        v = self.next
        self.next += 1
        self.created.append(v)
        self.cmds.append(N(v))
        return v

    def h(self, q: int) -> None:
        i = self.ends[q]
        j = self.fresh()
        self.cmds += [E((i, j)), M(i), X(j, (i,))]
        self.ends[q] = j

    def rz(self, q: int, theta: AngleExpr) -> None:
        i = self.ends[q]
        a0, a1 = self.fresh(), self.fresh()
        self.cmds += [E((i, a0)), E((a0, a1)), M(i, "XY", -theta), M(a0), X(a1, (a0,)), Z(a1, (i,))]
        self.ends[q] = a1

    def cnot(self, c: int, t: int) -> None:
        ci, ti = self.ends[c], self.ends[t]
        a0, a1 = self.fresh(), self.fresh()
        self.cmds += [
            E((ti, a0)), E((ci, a0)), E((a0, a1)),
            M(ti), M(a0),
            X(a1, (a0,)), Z(a1, (ti,)), Z(ci, (ti,)),
        ]  # fmt: skip
        self.ends[t] = a1

    def gate(self, g: Gate) -> None:
        k, qs = g.kind, g.qubits
        if k == "H":
            self.h(qs[0])
        elif k == "RZ":
            self.rz(qs[0], g.angle)
        elif k == "S":
            self.rz(qs[0], _PI_2)
        elif k == "Z":
            self.rz(qs[0], _PI)
        elif k == "X":
            self.h(qs[0])
            self.rz(qs[0], _PI)
            self.h(qs[0])
        elif k == "Y":
            self.rz(qs[0], _PI)
            self.gate(Gate("X", qs))
        elif k == "CNOT":
            self.cnot(*qs)
        elif k == "SWAP":
            a, b = qs
            self.cnot(a, b)
            self.cnot(b, a)
            self.cnot(a, b)
        else:  # pragma: no cover - Gate validates kinds
            raise TranspileError(f"unknown gate kind {k!r}")


def gate_to_fragment(g: Gate, wire_ends: dict[int, int], next_node: int | None = None) -> GateFragment:
    """Fragment for one gate; new nodes are numbered from ``next_node``."""
    missing = [q for q in g.qubits if q not in wire_ends]
    if missing:
        raise TranspileError(f"no wire end for qubit(s) {missing}")
    if next_node is None:
        next_node = max(wire_ends.values(), default=-1) + 1
    b = _Builder(wire_ends, next_node)
    b.gate(g)
    consumed = tuple(wire_ends[q] for q in g.qubits if b.ends[q] != wire_ends[q])
    return GateFragment(g.kind, consumed, tuple(b.created), tuple(b.cmds), b.ends)


def fragment_pattern(frag: GateFragment, wire_ends: dict[int, int], qubits: Sequence[int]) -> Pattern:
    """The fragment as a stand-alone pattern on ``qubits`` (in that order)."""
    return Pattern(tuple(wire_ends[q] for q in qubits), tuple(frag.wire_ends[q] for q in qubits), frag.commands)


def circuit_to_pattern(c: Circuit) -> Pattern:
    """Compose gate fragments left to right, then standardize and shift signals.

    Inputs are nodes ``0..width-1`` (qubit order) and outputs are the final
    wire ends, also in qubit order.  The circuit's global phase is not
    represented.
    """
    b = _Builder({q: q for q in range(c.width)}, c.width)
    for g in c.gates:
        b.gate(g)
    raw = Pattern(tuple(range(c.width)), tuple(b.ends[q] for q in range(c.width)), tuple(b.cmds))
    return normalize(raw)
