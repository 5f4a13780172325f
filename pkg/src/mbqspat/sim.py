"""Statevector simulation of circuits and patterns, and equivalence checks.

States are little numpy tensors with one axis of size 2 per qubit; the first
axis is the most significant bit of the flattened vector.

Pattern simulation is lazy: ``N`` and ``E`` are only realised when a later
command touches one of their nodes, so at any time the live register holds
the unmeasured nodes that have been touched plus their neighbours.
"""

from __future__ import annotations

import csv
import io as _io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .pattern import C, E, M, N, Pattern, S, X, Z

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.diag([1, 1j])
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0 + 0j, -1.0])
_FIXED = {"H": _H, "S": _S, "X": _X, "Y": _Y, "Z": _Z}
_CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]].reshape(2, 2, 2, 2)
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]].reshape(2, 2, 2, 2)


class SimulationError(RuntimeError):
    pass


class ZeroProbabilityBranch(SimulationError):
    """A forced measurement outcome has zero probability."""


# -- outcome policies ----------------------------------------------------------


class OutcomePolicy:
    def reset(self, n_meas: int) -> None:
        pass

    def choose(self, k: int, p0: float) -> int:
        raise NotImplementedError


@dataclass
class AllZero(OutcomePolicy):
    def choose(self, k: int, p0: float) -> int:
        return 0


@dataclass
class Random(OutcomePolicy):
    """Outcomes drawn from their Born probabilities."""

    seed: int | None = None
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._rng = np.random.default_rng(self.seed)

    def choose(self, k: int, p0: float) -> int:
        return int(self._rng.random() >= p0)


@dataclass
class Fixed(OutcomePolicy):
    outcomes: Sequence[int]

    def reset(self, n_meas: int) -> None:
        if len(self.outcomes) != n_meas:
            raise SimulationError(f"policy has {len(self.outcomes)} outcomes for {n_meas} measurements")

    def choose(self, k: int, p0: float) -> int:
        return int(self.outcomes[k])


# -- state helpers -------------------------------------------------------------


def random_state(n: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Haar-random pure state on ``n`` qubits as a flat vector."""
    rng = np.random.default_rng(rng)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def basis_state(bits: Sequence[int]) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)) or "0", 2)] = 1.0
    return v


def plus_state(n: int) -> np.ndarray:
    return np.full(2**n, 2 ** (-n / 2), dtype=complex)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|`` for normalised vectors (global phase drops out)."""
    a, b = np.ravel(a), np.ravel(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)))


def bhattacharyya(a: np.ndarray, b: np.ndarray) -> float:
    """Bhattacharyya coefficient of the computational-basis distributions."""
    a, b = np.ravel(a), np.ravel(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(np.sum(np.abs(a) * np.abs(b)))


def apply_1q(psi: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(u, psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_2q(psi: np.ndarray, u: np.ndarray, a: int, b: int) -> np.ndarray:
    out = np.tensordot(u, psi, axes=([2, 3], [a, b]))
    return np.moveaxis(out, [0, 1], [a, b])


def apply_cz(psi: np.ndarray, a: int, b: int) -> np.ndarray:
    idx = [slice(None)] * psi.ndim
    idx[a] = 1
    idx[b] = 1
    psi = psi.copy()
    psi[tuple(idx)] *= -1
    return psi


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def measurement_vector(plane: str, angle: float) -> np.ndarray:
    """Outcome-0 basis vector of a ``plane`` measurement at ``angle``."""
    if plane == "XY":
        return np.array([1, np.exp(1j * angle)]) / math.sqrt(2)
    if plane == "YZ":
        return np.array([math.cos(angle / 2), 1j * math.sin(angle / 2)])
    if plane == "XZ":
        return np.array([math.cos(angle / 2), math.sin(angle / 2)], dtype=complex)
    raise ValueError(f"unknown plane {plane!r}")


def clifford_matrix(word: str) -> np.ndarray:
    """Matrix of a word over {H, S, X, Y, Z} applied left to right in time."""
    u = np.eye(2, dtype=complex)
    for ch in word:
        u = _FIXED[ch] @ u
    return u


# -- circuits --------------------------------------------------------------------


def gate_matrix(g: Gate, binding: Mapping[int, float] | None = None) -> np.ndarray:
    if g.kind == "RZ":
        return rz_matrix(g.angle.evaluate(binding))  # type: ignore[union-attr]
    if g.kind == "CNOT":
        return _CNOT
    if g.kind == "SWAP":
        return _SWAP
    return _FIXED[g.kind]


def simulate_circuit(c: Circuit, state: np.ndarray, binding: Mapping[int, float] | None = None) -> np.ndarray:
    """Apply ``c`` (gates in order, then the global phase) to a flat state vector."""
    state = np.asarray(state, dtype=complex)
    if state.size != 2**c.width:
        raise ValueError(f"state has {state.size} amplitudes, circuit width is {c.width}")
    psi = state.reshape((2,) * c.width)
    for g in c.gates:
        u = gate_matrix(g, binding)
        if len(g.qubits) == 1:
            psi = apply_1q(psi, u, g.qubits[0])
        else:
            psi = apply_2q(psi, u, *g.qubits)
    return np.exp(1j * c.phase.evaluate(binding)) * psi.reshape(-1)


def circuit_unitary(c: Circuit, binding: Mapping[int, float] | None = None) -> np.ndarray:
    dim = 2**c.width
    return np.stack([simulate_circuit(c, col, binding) for col in np.eye(dim, dtype=complex)], axis=1)


# -- patterns --------------------------------------------------------------------


@dataclass
class PatternRun:
    state: np.ndarray
    outcomes: dict[int, int]
    probability: float
    max_live: int


class _Register:
    def __init__(self, state: np.ndarray, nodes: Sequence[int]):
        self.psi = np.asarray(state, dtype=complex).reshape((2,) * len(nodes)) if nodes else np.asarray(state, dtype=complex).reshape(())
        self.axes = list(nodes)
        self.max_live = len(nodes)

    def add_plus(self, v: int) -> None:
        self.psi = np.multiply.outer(self.psi, np.array([1, 1], dtype=complex) / math.sqrt(2))
        self.axes.append(v)
        self.max_live = max(self.max_live, len(self.axes))

    def axis(self, v: int) -> int:
        return self.axes.index(v)

    def apply(self, u: np.ndarray, v: int) -> None:
        self.psi = apply_1q(self.psi, u, self.axis(v))

    def cz(self, a: int, b: int) -> None:
        self.psi = apply_cz(self.psi, self.axis(a), self.axis(b))

    def project(self, v: int, vec: np.ndarray, outcome: int) -> None:
        ax = self.axis(v)
        bra = np.conj(vec) if outcome == 0 else np.conj(np.array([-np.conj(vec[1]), np.conj(vec[0])]))
        self.psi = np.tensordot(bra, self.psi, axes=([0], [ax]))
        del self.axes[ax]

    def probability0(self, v: int, vec: np.ndarray) -> float:
        ax = self.axis(v)
        amp = np.tensordot(np.conj(vec), self.psi, axes=([0], [ax]))
        return float(np.vdot(amp, amp).real)


def simulate_pattern(
    p: Pattern,
    state: np.ndarray | None = None,
    policy: OutcomePolicy | None = None,
    binding: Mapping[int, float] | None = None,
    normalize: bool = True,
) -> PatternRun:
    """Run ``p`` on ``state`` (defaults to ``|+>`` on every input).

    An ``M`` on node ``i`` first applies ``X**s Z**t`` (parities of its
    domains) and then measures in its plane and angle; outcome 0 is the
    ``+`` eigenstate.  The returned state is ordered by ``p.output_nodes``.

    ``probability`` is the probability of the realised outcome branch.
    With ``normalize=False`` the branch state is returned unnormalised.
    """
    policy = policy or AllZero()
    policy.reset(len(p.measurements()))
    if state is None:
        state = plus_state(len(p.input_nodes))
    state = np.asarray(state, dtype=complex).reshape(-1)
    if state.size != 2 ** len(p.input_nodes):
        raise ValueError(f"state has {state.size} amplitudes for {len(p.input_nodes)} inputs")
    reg = _Register(state, p.input_nodes)
    unborn: set[int] = set()
    pending: dict[int, list[int]] = {}
    outcomes: dict[int, int] = {}
    shifts: dict[int, int] = {}
    prob = 1.0
    k_meas = 0

    def signal(dom: Iterable[int]) -> int:
        return sum(outcomes[d] ^ shifts.get(d, 0) for d in dom) % 2

    def touch(v: int) -> None:
        if v in unborn:
            unborn.discard(v)
            reg.add_plus(v)
        for u in pending.pop(v, []):
            if u in unborn:
                unborn.discard(u)
                reg.add_plus(u)
            pending[u].remove(v)
            reg.cz(v, u)

    for cmd in p.commands:
        if isinstance(cmd, N):
            unborn.add(cmd.node)
        elif isinstance(cmd, E):
            a, b = cmd.nodes
            # an edge toggles, so a repeated E cancels the pending one
            if b in pending.get(a, []):
                pending[a].remove(b)
                pending[b].remove(a)
            else:
                pending.setdefault(a, []).append(b)
                pending.setdefault(b, []).append(a)
        elif isinstance(cmd, M):
            v = cmd.node
            touch(v)
            if signal(cmd.s_domain):
                reg.apply(_X, v)
            if signal(cmd.t_domain):
                reg.apply(_Z, v)
            vec = measurement_vector(cmd.plane, cmd.angle.evaluate(binding))
            p0 = reg.probability0(v, vec) / max(float(np.vdot(reg.psi, reg.psi).real), 1e-300)
            r = policy.choose(k_meas, p0)
            pr = p0 if r == 0 else 1.0 - p0
            if pr < 1e-12:
                raise ZeroProbabilityBranch(f"outcome {r} of node {v} has probability {pr:.3g}")
            reg.project(v, vec, r)
            if normalize:
                reg.psi = reg.psi / math.sqrt(float(np.vdot(reg.psi, reg.psi).real))
            prob *= pr
            outcomes[v] = r
            k_meas += 1
        elif isinstance(cmd, (X, Z)):
            touch(cmd.node)
            if signal(cmd.domain):
                reg.apply(_X if isinstance(cmd, X) else _Z, cmd.node)
        elif isinstance(cmd, S):
            shifts[cmd.node] = shifts.get(cmd.node, 0) ^ signal(cmd.domain)
        elif isinstance(cmd, C):
            touch(cmd.node)
            reg.apply(clifford_matrix(cmd.name), cmd.node)
        else:  # pragma: no cover
            raise SimulationError(f"unknown command {cmd!r}")
    for v in list(unborn) + list(pending):
        touch(v)
    if sorted(reg.axes) != sorted(p.output_nodes):
        raise SimulationError(f"live nodes {reg.axes} differ from outputs {list(p.output_nodes)}")
    perm = [reg.axes.index(v) for v in p.output_nodes]
    psi = np.transpose(reg.psi, perm) if perm else reg.psi
    return PatternRun(psi.reshape(-1), outcomes, prob, reg.max_live)


def run_pattern(p: Pattern, state=None, policy=None, binding=None) -> np.ndarray:
    return simulate_pattern(p, state, policy, binding).state


def simulate_pattern_eager(p: Pattern, state: np.ndarray | None, outcomes: Mapping[int, int], binding=None) -> np.ndarray:
    """Reference simulator: every node is created up front, all edges applied, then the rest.

    Only valid for standard patterns; returns the unnormalised branch state.
    """
    if not p.is_standard():
        raise SimulationError("eager simulation needs a standard pattern")
    order = list(p.input_nodes) + [c.node for c in p.commands if isinstance(c, N)]
    n_in = len(p.input_nodes)
    psi = np.asarray(state if state is not None else plus_state(n_in), dtype=complex)
    for _ in order[n_in:]:
        psi = np.kron(psi, np.array([1, 1]) / math.sqrt(2))
    psi = psi.reshape((2,) * len(order))
    axes = list(order)
    for a, b in p.edge_list():
        psi = apply_cz(psi, axes.index(a), axes.index(b))
    par = lambda dom: sum(outcomes[d] for d in dom) % 2  # noqa: E731
    for cmd in p.commands:
        if isinstance(cmd, M):
            ax = axes.index(cmd.node)
            if par(cmd.s_domain):
                psi = apply_1q(psi, _X, ax)
            if par(cmd.t_domain):
                psi = apply_1q(psi, _Z, ax)
            vec = measurement_vector(cmd.plane, cmd.angle.evaluate(binding))
            if outcomes[cmd.node]:
                vec = np.array([-np.conj(vec[1]), np.conj(vec[0])])
            psi = np.tensordot(np.conj(vec), psi, axes=([0], [ax]))
            del axes[ax]
        elif isinstance(cmd, (X, Z)) and par(cmd.domain):
            psi = apply_1q(psi, _X if isinstance(cmd, X) else _Z, axes.index(cmd.node))
        elif isinstance(cmd, C):
            psi = apply_1q(psi, clifford_matrix(cmd.name), axes.index(cmd.node))
    perm = [axes.index(v) for v in p.output_nodes]
    return np.transpose(psi, perm).reshape(-1) if perm else psi.reshape(-1)


def branch_states(p: Pattern, state: np.ndarray | None = None, binding=None) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Normalised output states of every non-zero-probability outcome branch."""
    n = len(p.measurements())
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        try:
            run = simulate_pattern(p, state, Fixed(bits), binding)
        except ZeroProbabilityBranch:
            continue
        out.append((bits, run.state))
    return out


# -- validation ------------------------------------------------------------------


@dataclass
class ValidationReport:
    passed: bool
    trials: int
    seed: int
    min_fidelity: float
    min_bhattacharyya: float
    label: str = ""
    binding: dict = field(default_factory=dict)

    def row(self) -> dict:
        return {
            "label": self.label,
            "status": "PASS" if self.passed else "FAIL",
            "trials": self.trials,
            "seed": self.seed,
            "min_fidelity": f"{self.min_fidelity:.12f}",
            "min_bhattacharyya": f"{self.min_bhattacharyya:.12f}",
        }


BC_THRESHOLD = 0.999
FIDELITY_TOL = 1e-8


def random_binding(symbols: Iterable[int], rng: np.random.Generator) -> dict[int, float]:
    return {s: float(rng.uniform(-1.0, 1.0)) for s in sorted(symbols)}


def validate_pattern_vs_circuit(
    p: Pattern,
    c: Circuit,
    trials: int = 10,
    seed: int = 0,
    binding: Mapping[int, float] | None = None,
    label: str = "",
) -> ValidationReport:
    """Compare pattern and circuit on ``trials`` Haar-random inputs.

    Each trial draws fresh Born-sampled outcomes.  Unbound symbols get
    uniform values in [-1, 1].  PASS needs BC > 0.999 and fidelity
    >= 1 - 1e-8 on every trial.
    """
    if len(p.input_nodes) != c.width or len(p.output_nodes) != c.width:
        raise ValueError("pattern and circuit widths differ")
    rng = np.random.default_rng(seed)
    bind = dict(binding or {})
    bind.update(random_binding((p.symbols | c.symbols) - set(bind), rng))
    min_f = min_bc = 1.0
    for _ in range(trials):
        psi = random_state(c.width, rng)
        want = simulate_circuit(c, psi, bind)
        got = simulate_pattern(p, psi, Random(int(rng.integers(2**32))), bind).state
        min_f = min(min_f, fidelity(got, want))
        min_bc = min(min_bc, bhattacharyya(got, want))
    ok = min_bc > BC_THRESHOLD and min_f >= 1 - FIDELITY_TOL
    return ValidationReport(ok, trials, seed, min_f, min_bc, label, bind)


def determinism_check(p: Pattern, trials: int = 8, seed: int = 0, binding: Mapping[int, float] | None = None, tol: float = 1e-9) -> bool:
    """True if differently sampled outcome branches give the same output state."""
    rng = np.random.default_rng(seed)
    bind = dict(binding or {})
    bind.update(random_binding(p.symbols - set(bind), rng))
    psi = random_state(len(p.input_nodes), rng)
    ref = simulate_pattern(p, psi, Random(int(rng.integers(2**32))), bind).state
    for _ in range(trials):
        got = simulate_pattern(p, psi, Random(int(rng.integers(2**32))), bind).state
        if fidelity(ref, got) < 1 - tol:
            return False
    return True


def validation_csv(reports: Sequence[ValidationReport]) -> str:
    buf = _io.StringIO()
    cols = ["label", "status", "trials", "seed", "min_fidelity", "min_bhattacharyya"]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
