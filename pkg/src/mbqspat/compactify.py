"""Node-count reducing rewrites that keep the implemented unitary.

Two rewrites are provided.

``contract_wire_x_pairs``
    Two consecutive zero-angle measurements inside a bare wire
    ``a - u - w - b`` act as the identity, since
    ``<+|_u <+|_w CZ_au CZ_uw CZ_wb |+>_u |+>_w = CZ_ab / 2``.
    Both nodes are dropped, ``a`` and ``b`` are joined and the two signals
    are fixed to 0.

``eliminate_pauli_measurements``
    Pauli measurements are removed with the graph-state rules

    * Z on ``v``: delete ``v``;
    * Y on ``v``: local complement at ``v``, delete ``v``, apply
      ``sqrt(-iZ)`` to each former neighbour;
    * X on ``v``: with a neighbour ``b0``, complement at ``b0``, ``v``, ``b0``,
      delete ``v``, apply ``sqrt(+iY)`` to ``b0`` and ``Z`` to each node of
      ``N(v) - N(b0) - {b0}``;

    each projecting onto the ``+1`` eigenvector.  These hold as operator
    identities whatever state the other vertices carry, provided ``v`` (and
    ``b0`` for the X rule) started in ``|+>``.  Inputs are therefore never
    removed nor used as ``b0``, and the rewritten pattern is exact for
    arbitrary inputs.  The local Cliffords collect in a per-node "vertex
    operator" that is finally folded into the remaining measurement bases
    (which may leave the XY plane) and into ``C`` commands on the outputs.

The removed node's outcome is replaced by the affine function of earlier
outcomes that selects the ``+1`` branch; later domains are rewritten
accordingly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .angle import AngleExpr
from .flow import Metrics, compute_metrics
from .pattern import PLANES, C, E, M, N, OpenGraph, Pattern, PatternError, S, X, Z, graph_of
from .sim import clifford_matrix

# -- single-qubit Clifford helpers ---------------------------------------------

_I2 = np.eye(2, dtype=complex)
_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PZ = np.diag([1.0 + 0j, -1.0])
PAULIS = {"X": _PX, "Y": _PY, "Z": _PZ}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.diag([1, 1j])

SQRT_MINUS_IZ = np.diag([np.exp(-0.25j * math.pi), np.exp(0.25j * math.pi)])  # exp(-i pi/4 Z)
SQRT_PLUS_IY = (_I2 + 1j * _PY) / math.sqrt(2)  # exp(+i pi/4 Y)


def _phase_key(u: np.ndarray) -> tuple:
    flat = u.reshape(-1)
    k = int(np.argmax(np.abs(flat) > 1e-9))
    v = flat * (abs(flat[k]) / flat[k])
    return tuple(np.round(v, 6).tolist())


def _clifford_words() -> dict[tuple, str]:
    table: dict[tuple, str] = {_phase_key(_I2): ""}
    frontier = [("", _I2)]
    while frontier:
        nxt = []
        for word, u in frontier:
            for ch, g in (("H", _H), ("S", _S)):
                w = g @ u
                key = _phase_key(w)
                if key not in table:
                    table[key] = word + ch
                    nxt.append((word + ch, w))
        frontier = nxt
    return table


_WORDS = _clifford_words()


def clifford_word(u: np.ndarray) -> str:
    """Shortest H/S word (time order) equal to ``u`` up to phase."""
    try:
        return _WORDS[_phase_key(u)]
    except KeyError:
        raise ValueError("matrix is not a single-qubit Clifford") from None


def conjugate_pauli(u: np.ndarray, letter: str) -> tuple[int, str]:
    """``u^dagger P u = sign * Q`` for the single-qubit Pauli ``P = letter``."""
    m = u.conj().T @ PAULIS[letter] @ u
    for q, pm in PAULIS.items():
        t = np.trace(pm @ m).real / 2
        if abs(abs(t) - 1) < 1e-9:
            return (1 if t > 0 else -1), q
    raise ValueError("not a Clifford conjugation")


def _bits(letter: str) -> tuple[int, int]:
    return {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}[letter]


def bloch_rotation(u: np.ndarray) -> np.ndarray:
    """``R`` with Bloch(u |psi>) = R Bloch(|psi>)."""
    sig = [_PX, _PY, _PZ]
    return np.array([[np.trace(sig[i] @ u @ sig[j] @ u.conj().T).real / 2 for j in range(3)] for i in range(3)])


def bloch_vector(plane: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    if plane == "XY":
        return np.array([c, s, 0.0])
    if plane == "YZ":
        return np.array([0.0, s, c])
    if plane == "XZ":
        return np.array([s, 0.0, c])
    raise ValueError(plane)


def _wrap(a: AngleExpr) -> AngleExpr:
    r = a.pi % 2
    if r > 1:
        r -= 2
    return AngleExpr(r, a.const, a.coeffs)


def rotate_measurement(plane: str, angle: AngleExpr, u: np.ndarray) -> tuple[str, AngleExpr]:
    """Plane and angle of the basis ``u |m>`` where ``|m>`` is the ``(plane, angle)`` basis.

    Clifford rotations permute Bloch axes with signs, so the new angle is
    ``+-angle + k pi/2`` in some coordinate plane.
    """
    rot = bloch_rotation(u)
    probes = (0.37, 1.91, -2.6)
    targets = [rot @ bloch_vector(plane, a) for a in probes]
    for new_plane in PLANES:
        for sign in (1, -1):
            for k in range(4):
                if all(np.allclose(bloch_vector(new_plane, sign * a + k * math.pi / 2), t, atol=1e-9) for a, t in zip(probes, targets)):
                    return new_plane, _wrap(angle.scale(sign) + AngleExpr.of_pi(Fraction(k, 2)))
    raise ValueError("rotation does not preserve coordinate planes")  # pragma: no cover


def pauli_axis_of(plane: str, angle: AngleExpr) -> tuple[int, str] | None:
    """``(sign, letter)`` if the outcome-0 vector is a Pauli eigenvector, else None."""
    if angle.is_symbolic():
        return None
    n = bloch_vector(plane, angle.evaluate())
    k = int(np.argmax(np.abs(n)))
    if abs(abs(n[k]) - 1) > 1e-9:
        return None
    return (1 if n[k] > 0 else -1), "XYZ"[k]


# -- affine signals ------------------------------------------------------------

Signal = tuple[int, frozenset]  # constant bit, set of node outcomes


def _sig(dom: Iterable[int]) -> Signal:
    out: set[int] = set()
    for d in dom:
        out ^= {d}
    return 0, frozenset(out)


def _xor(a: Signal, b: Signal) -> Signal:
    return a[0] ^ b[0], a[1] ^ b[1]


def _subst(sig: Signal, node: int, value: Signal) -> Signal:
    if node not in sig[1]:
        return sig
    return _xor((sig[0], sig[1] - {node}), value)


def _ordered(dom: frozenset, order: Mapping[int, int]) -> tuple[int, ...]:
    return tuple(sorted(dom, key=lambda v: order.get(v, -1)))


# -- graph operations ----------------------------------------------------------


def local_complement(g: OpenGraph, v: int) -> OpenGraph:
    """Complement the edges among the neighbours of ``v``."""
    if v not in g.adjacency:
        raise KeyError(f"unknown node {v}")
    edges = set(g.edges)
    for a, b in itertools.combinations(sorted(g.neighbors(v)), 2):
        edges ^= {(a, b)}
    return OpenGraph(g.nodes, frozenset(edges), g.inputs, g.outputs)


def _lc(adj: dict[int, set[int]], v: int) -> None:
    for a, b in itertools.combinations(sorted(adj[v]), 2):
        if b in adj[a]:
            adj[a].discard(b)
            adj[b].discard(a)
        else:
            adj[a].add(b)
            adj[b].add(a)


def _delete(adj: dict[int, set[int]], v: int) -> None:
    for u in adj.pop(v):
        adj[u].discard(v)


def graph_measure(adj: dict[int, set[int]], v: int, letter: str, b0: int | None = None) -> dict[int, np.ndarray]:
    """Apply a graph-state Pauli-measurement rule in place; return the local Cliffords.

    The ``+1`` branch is taken.  For ``letter == "X"``, ``b0`` must be a
    neighbour of ``v`` (ignored when ``v`` is isolated).
    """
    nb = set(adj[v])
    if letter == "Z" or (letter == "X" and not nb):
        _delete(adj, v)
        return {}
    if letter == "Y":
        _lc(adj, v)
        _delete(adj, v)
        return {u: SQRT_MINUS_IZ for u in nb}
    if b0 is None or b0 not in nb:
        raise ValueError("X rule needs a neighbour b0")
    nb_b0 = set(adj[b0])
    _lc(adj, b0)
    _lc(adj, v)
    _lc(adj, b0)
    _delete(adj, v)
    ops = {b0: SQRT_PLUS_IY}
    for u in nb - nb_b0 - {b0}:
        ops[u] = _PZ
    return ops


# -- reports -------------------------------------------------------------------


@dataclass
class CompactReport:
    nodes_before: int
    nodes_after: int
    removed: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)
    planes: dict[str, int] = field(default_factory=dict)
    metrics_before: Metrics | None = None
    metrics_after: Metrics | None = None
    guarantee: str = "arbitrary-input"
    choices: dict[int, int] = field(default_factory=dict)
    relabel: dict[int, int] = field(default_factory=dict)

    @property
    def n_removed(self) -> int:
        return self.nodes_before - self.nodes_after

    def summary(self) -> str:
        lines = [
            f"nodes {self.nodes_before} -> {self.nodes_after} (removed {self.n_removed})",
            f"guarantee: {self.guarantee}",
            "planes: " + ", ".join(f"{k}={v}" for k, v in sorted(self.planes.items())),
        ]
        if self.skipped:
            lines.append(f"kept Pauli measurements on {self.skipped}")
        if self.choices:
            lines.append("X-rule neighbours: " + ", ".join(f"{v}->{b}" for v, b in sorted(self.choices.items())))
        return "\n".join(lines)


def lc_gain_bound(p: Pattern) -> int:
    """Pauli measurements on non-output nodes: an upper bound on removable nodes."""
    outputs = set(p.output_nodes)
    count = 0
    for c in p.commands:
        if isinstance(c, M) and c.node not in outputs and c.plane == "XY" and c.angle.pauli_axis() is not None:
            count += 1
    return count


def _plane_counts(p: Pattern) -> dict[str, int]:
    out: dict[str, int] = {}
    for c in p.measurements():
        out[c.plane] = out.get(c.plane, 0) + 1
    return out


def _require_ready(p: Pattern) -> None:
    if not p.is_standard():
        raise PatternError("compactification needs a standard pattern")
    if any(isinstance(c, S) for c in p.commands):
        raise PatternError("compactification needs signal shifts to be folded in")


# -- wire contraction ----------------------------------------------------------


def _find_wire_pair(p: Pattern) -> tuple[int, int, int, int] | None:
    g = graph_of(p)
    fixed = set(p.input_nodes) | set(p.output_nodes)
    zero = {
        c.node
        for c in p.commands
        if isinstance(c, M) and c.plane == "XY" and not c.t_domain and c.angle.is_zero()
    }
    for u in p.measurement_order():
        if u in fixed or u not in zero or g.degree(u) != 2:
            continue
        for w in sorted(g.neighbors(u)):
            if w in fixed or w not in zero or g.degree(w) != 2:
                continue
            (a,) = g.neighbors(u) - {w}
            (b,) = g.neighbors(w) - {u}
            if a != b:
                return a, u, w, b
    return None


def contract_wire_x_pairs(p: Pattern, relabel: bool = True) -> tuple[Pattern, CompactReport]:
    """Remove pairs of zero-angle measurements on bare wire segments until none remain."""
    _require_ready(p)
    before = compute_metrics(p)
    removed: list[int] = []
    cur = p
    while (hit := _find_wire_pair(cur)) is not None:
        a, u, w, b = hit
        gone = {u, w}
        cmds = []
        placed = False
        for c in cur.commands:
            if isinstance(c, (N, M)) and c.node in gone:
                continue
            if isinstance(c, E) and gone & set(c.nodes):
                if not placed:
                    cmds.append(E((a, b)))
                    placed = True
                continue
            if isinstance(c, M):
                c = replace(c, s_domain=tuple(d for d in c.s_domain if d not in gone), t_domain=tuple(d for d in c.t_domain if d not in gone))
            elif isinstance(c, (X, Z)):
                dom = tuple(d for d in c.domain if d not in gone)
                if not dom:
                    continue
                c = type(c)(c.node, dom)
            cmds.append(c)
        # an existing a-b edge cancels against the new one
        key = {a, b}
        count = sum(1 for c in cmds if isinstance(c, E) and set(c.nodes) == key)
        if count == 2:
            cmds = [c for c in cmds if not (isinstance(c, E) and set(c.nodes) == key)]
        cur = Pattern(cur.input_nodes, cur.output_nodes, tuple(cmds))
        removed += [u, w]
    mapping: dict[int, int] = {}
    if relabel and removed:
        mapping = {v: k for k, v in enumerate(cur.nodes)}
        cur = cur.relabel(mapping)
    report = CompactReport(
        nodes_before=before.n,
        nodes_after=len(cur.nodes),
        removed=removed,
        planes=_plane_counts(cur),
        metrics_before=before,
        metrics_after=compute_metrics(cur),
        relabel=mapping,
    )
    return cur, report


# -- Pauli-measurement elimination ---------------------------------------------


@dataclass
class _Meas:
    node: int
    plane: str
    angle: AngleExpr
    s: Signal
    t: Signal


def eliminate_pauli_measurements(p: Pattern, relabel: bool = True) -> tuple[Pattern, CompactReport]:
    """Remove every Pauli measurement on a non-input, non-output node.

    An X measurement whose neighbours are all inputs is kept (no valid
    ``b0``); such nodes are listed in ``report.skipped``.
    """
    _require_ready(p)
    before = compute_metrics(p)
    inputs, outputs = set(p.input_nodes), set(p.output_nodes)
    adj: dict[int, set[int]] = {v: set() for v in p.nodes}
    for a, b in p.edge_list():
        adj[a].add(b)
        adj[b].add(a)
    vop = {v: _I2 for v in p.nodes}
    post = {v: _I2 for v in p.output_nodes}
    meas = [_Meas(c.node, c.plane, c.angle, _sig(c.s_domain), _sig(c.t_domain)) for c in p.measurements()]
    corr_x = {v: (0, frozenset()) for v in p.output_nodes}
    corr_z = {v: (0, frozenset()) for v in p.output_nodes}
    for c in p.commands:
        if isinstance(c, X):
            corr_x[c.node] = _xor(corr_x[c.node], _sig(c.domain))
        elif isinstance(c, Z):
            corr_z[c.node] = _xor(corr_z[c.node], _sig(c.domain))
        elif isinstance(c, C):
            post[c.node] = clifford_matrix(c.name) @ post[c.node]

    removed: list[int] = []
    skipped: list[int] = []
    choices: dict[int, int] = {}
    kept: list[_Meas] = []
    for k, m in enumerate(meas):
        v = m.node
        axis = pauli_axis_of(m.plane, m.angle)
        if v in inputs or axis is None:
            kept.append(m)
            continue
        sign_b, letter_b = axis
        sign_v, letter = conjugate_pauli(vop[v], letter_b)
        b0 = None
        if letter == "X" and adj[v]:
            cands = sorted(u for u in adj[v] if u not in inputs)
            if not cands:
                skipped.append(v)
                kept.append(m)
                continue
            b0 = cands[0]
            choices[v] = b0
        # outcome selecting the +1 eigenvector of the graph-level Pauli
        flip_s = letter_b in ("Y", "Z")
        flip_t = letter_b in ("X", "Y")
        value: Signal = (int(sign_b * sign_v < 0), frozenset())
        if flip_s:
            value = _xor(value, m.s)
        if flip_t:
            value = _xor(value, m.t)
        for u, op in graph_measure(adj, v, letter, b0).items():
            vop[u] = vop[u] @ op
        del vop[v]
        removed.append(v)
        for later in meas[k + 1:]:
            later.s = _subst(later.s, v, value)
            later.t = _subst(later.t, v, value)
        for o in outputs:
            corr_x[o] = _subst(corr_x[o], v, value)
            corr_z[o] = _subst(corr_z[o], v, value)

    order = {m.node: k for k, m in enumerate(kept)}

    def fold(u: np.ndarray, s: Signal, t: Signal) -> tuple[np.ndarray, tuple, tuple]:
        # X^s Z^t u = (X^S Z^T) K up to phase, with K the constant part
        k = np.linalg.matrix_power(_PX, s[0]) @ np.linalg.matrix_power(_PZ, t[0]) @ u
        _, qx = conjugate_pauli(k, "X")
        _, qz = conjugate_pauli(k, "Z")
        (xx, xz), (zx, zz) = _bits(qx), _bits(qz)
        new_s = (frozenset() if not xx else s[1]) ^ (frozenset() if not zx else t[1])
        new_t = (frozenset() if not xz else s[1]) ^ (frozenset() if not zz else t[1])
        return k, _ordered(new_s, order), _ordered(new_t, order)

    gone = set(removed)
    new_meas = []
    for m in kept:
        k, s_dom, t_dom = fold(vop[m.node], m.s, m.t)
        plane, angle = rotate_measurement(m.plane, m.angle, k.conj().T)
        new_meas.append(M(m.node, plane, angle, s_dom, t_dom))
    corrections: list = []
    cliffords: list = []
    tail_x = []
    for o in p.output_nodes:
        k, xs, zs = fold(vop[o], corr_x[o], corr_z[o])
        if zs:
            corrections.append(Z(o, zs))
        if xs:
            tail_x.append(X(o, xs))
        word = clifford_word(post[o] @ k)
        if word:
            cliffords.append(C(o, word))
    preps = [c for c in p.commands if isinstance(c, N) and c.node not in gone]
    edges = sorted((min(a, b), max(a, b)) for a in adj for b in adj[a] if a < b)
    cmds = preps + [E(e) for e in edges] + new_meas + corrections + tail_x + cliffords
    out = Pattern(p.input_nodes, p.output_nodes, tuple(cmds))
    mapping: dict[int, int] = {}
    if relabel and removed:
        mapping = {v: k for k, v in enumerate(out.nodes)}
        out = out.relabel(mapping)
    report = CompactReport(
        nodes_before=before.n,
        nodes_after=len(out.nodes),
        removed=removed,
        skipped=skipped,
        planes=_plane_counts(out),
        metrics_before=before,
        metrics_after=compute_metrics(out),
        choices=choices,
        relabel=mapping,
    )
    return out, report
