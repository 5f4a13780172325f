"""Pauli-exponential circuits over the gate set CNOT, S, H, X, Y, Z, SWAP, RZ.

``RZ(theta) = exp(-i theta Z / 2)``, so ``exp(-i c P)`` puts ``RZ(2c)`` at the
bottom of its CNOT staircase.  Every other gate is the exact textbook matrix;
the only phase a circuit accumulates comes from identity strings and is kept
symbolically in :attr:`Circuit.phase`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .angle import ZERO, AngleExpr, parse_angle
from .grouping import SubsetPartition
from .pauli import Hamiltonian, PauliString

GATE_KINDS = ("CNOT", "S", "H", "X", "Y", "Z", "SWAP", "RZ")
TWO_QUBIT = frozenset({"CNOT", "SWAP"})
SELF_INVERSE = frozenset({"H", "X", "Y", "Z", "CNOT", "SWAP"})


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: AngleExpr | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind} operands must differ")
        if (self.kind == "RZ") != (self.angle is not None):
            raise CircuitError("only RZ carries an angle")

    def __str__(self) -> str:
        args = ",".join(map(str, self.qubits))
        return f"{self.kind}({self.angle}; {args})" if self.angle is not None else f"{self.kind}({args})"


def cnot(c: int, t: int) -> Gate:
    return Gate("CNOT", (c, t))


def rz(angle: AngleExpr | float, q: int) -> Gate:
    return Gate("RZ", (q,), AngleExpr.coerce(angle))


def h(q: int) -> Gate:
    return Gate("H", (q,))


@dataclass(frozen=True)
class Circuit:
    """Ordered gates on ``width`` qubits; ``phase`` is a global phase angle."""

    width: int
    gates: tuple[Gate, ...] = ()
    phase: AngleExpr = field(default=ZERO)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(not 0 <= q < self.width for q in g.qubits):
                raise CircuitError(f"{g} outside width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise CircuitError("cannot concatenate circuits of different width")
        return Circuit(self.width, self.gates + other.gates, self.phase + other.phase)

    @property
    def symbols(self) -> set[int]:
        out = set(self.phase.symbols)
        for g in self.gates:
            if g.angle is not None:
                out.update(g.angle.symbols)
        return out

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)


def concat_circuits(circuits: Iterable[Circuit], width: int) -> Circuit:
    out = Circuit(width)
    for c in circuits:
        out = out + c
    return out


def _basis_change(letter: str, q: int) -> list[Gate]:
    # gates R with R P R^dagger = Z, in time order
    if letter == "X":
        return [Gate("H", (q,))]
    if letter == "Y":
        # S * Z = S^dagger, then H:  H S^dagger Y S H = Z
        return [Gate("S", (q,)), Gate("Z", (q,)), Gate("H", (q,))]
    return []


def _basis_restore(letter: str, q: int) -> list[Gate]:
    if letter == "X":
        return [Gate("H", (q,))]
    if letter == "Y":
        return [Gate("H", (q,)), Gate("S", (q,))]
    return []


def synth_string_exponential(p: PauliString, symbol: int | AngleExpr, scale: float = 1.0) -> Circuit:
    """Circuit for ``exp(-i c P)`` with ``c = scale * c[symbol]``.

    ``symbol`` may also be a ready-made :class:`AngleExpr` for ``c``.
    """
    c = AngleExpr.symbol(symbol, scale) if isinstance(symbol, int) else symbol.scale(scale)
    support = p.support
    if not support:
        return Circuit(p.n_q, (), -c)
    gates: list[Gate] = []
    for q in support:
        gates += _basis_change(p.letter(q), q)
    ladder = [cnot(a, b) for a, b in zip(support, support[1:])]
    gates += ladder
    gates.append(rz(c.scale(2), support[-1]))
    gates += ladder[::-1]
    for q in support:
        gates += _basis_restore(p.letter(q), q)
    return Circuit(p.n_q, tuple(gates))


def synth_subset_circuit(h: Hamiltonian, partition: SubsetPartition | Sequence[Sequence[int]], ell: int) -> Circuit:
    """Product of string exponentials for subset ``ell``, in subset order."""
    subsets = partition.subsets if isinstance(partition, SubsetPartition) else partition
    if not 0 <= ell < len(subsets):
        raise IndexError(f"subset {ell} out of range (n_ss={len(subsets)})")
    out = Circuit(h.n_q)
    for s in subsets[ell]:
        out = out + synth_string_exponential(h[s].pauli, s)
    return out


def optimize_level1(c: Circuit) -> Circuit:
    """Cancel adjacent self-inverse pairs and merge adjacent RZ rotations.

    Two gates are adjacent when no other gate touches their qubits in
    between.  A single stack-based pass reaches the fixpoint of these rules.
    """
    out: list[Gate | None] = []
    stacks: dict[int, list[int]] = {q: [] for q in range(c.width)}

    def top_shared(g: Gate) -> int | None:
        tops = {stacks[q][-1] if stacks[q] else None for q in g.qubits}
        if len(tops) != 1:
            return None
        idx = tops.pop()
        if idx is None:
            return None
        prev = out[idx]
        return idx if prev is not None and set(prev.qubits) == set(g.qubits) else None

    def pop(idx: int) -> None:
        for q in out[idx].qubits:  # type: ignore[union-attr]
            stacks[q].pop()
        out[idx] = None

    for g in c.gates:
        if g.kind == "RZ" and g.angle.is_zero():  # type: ignore[union-attr]
            continue
        idx = top_shared(g)
        if idx is not None:
            prev = out[idx]
            assert prev is not None
            if g.kind == prev.kind and g.kind in SELF_INVERSE and (g.kind == "SWAP" or g.qubits == prev.qubits):
                pop(idx)
                continue
            if g.kind == prev.kind == "RZ":
                merged = prev.angle + g.angle  # type: ignore[operator]
                if merged.is_zero():
                    pop(idx)
                else:
                    out[idx] = Gate("RZ", prev.qubits, merged)
                continue
        out.append(g)
        for q in g.qubits:
            stacks[q].append(len(out) - 1)
    return Circuit(c.width, tuple(g for g in out if g is not None), c.phase)


def optimize(c: Circuit, level: int) -> Circuit:
    if level == 0:
        return c
    if level == 1:
        return optimize_level1(c)
    raise ValueError(f"unsupported optimization level {level}")


def circuit_depth(c: Circuit) -> int:
    """ASAP layer count: a gate sits one layer past the latest gate on any of its qubits."""
    level = [0] * c.width
    depth = 0
    for g in c.gates:
        d = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = d
        depth = max(depth, d)
    return depth


# -- text export -------------------------------------------------------------

_QASM_NAMES = {"CNOT": "cx", "S": "s", "H": "h", "X": "x", "Y": "y", "Z": "z", "SWAP": "swap", "RZ": "rz"}
_QASM_KINDS = {v: k for k, v in _QASM_NAMES.items()}
_QASM_LINE = re.compile(r"^(?P<name>[a-z]+)(?:\((?P<angle>[^)]*)\))?\s+(?P<args>q\[\d+\](?:\s*,\s*q\[\d+\])*)\s*;$")


def to_qasm(c: Circuit) -> str:
    """Minimal OpenQASM-3-style text; ``c[s]`` symbols appear verbatim in angles."""
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{c.width}] q;"]
    if not c.phase.is_zero():
        lines.append(f"gphase({c.phase});")
    for g in c.gates:
        args = ", ".join(f"q[{q}]" for q in g.qubits)
        name = _QASM_NAMES[g.kind]
        if g.angle is not None:
            lines.append(f"{name}({g.angle}) {args};")
        else:
            lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


def from_qasm(text: str) -> Circuit:
    width = None
    phase = ZERO
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.fullmatch(r"qubit\[(\d+)\]\s+q\s*;", line)
        if m:
            width = int(m.group(1))
            continue
        m = re.fullmatch(r"gphase\((.*)\)\s*;", line)
        if m:
            phase = phase + parse_angle(m.group(1))
            continue
        m = _QASM_LINE.match(line)
        if m is None or m.group("name") not in _QASM_KINDS:
            raise CircuitError(f"line {lineno}: cannot parse {raw!r}")
        kind = _QASM_KINDS[m.group("name")]
        qubits = tuple(int(x) for x in re.findall(r"q\[(\d+)\]", m.group("args")))
        angle = parse_angle(m.group("angle")) if m.group("angle") is not None else None
        gates.append(Gate(kind, qubits, angle))
    if width is None:
        raise CircuitError("missing qubit declaration")
    return Circuit(width, tuple(gates), phase)
