import numpy as np
import pytest

from mbqspat.angle import AngleExpr
from mbqspat.circuit import Circuit, Gate, cnot, h, rz, synth_string_exponential
from mbqspat.flow import check_causal_flow, find_causal_flow
from mbqspat.grouping import group
from mbqspat.pattern import E, M, N, X, graph_of
from mbqspat.pauli import parse_pauli, pauli_exponential
from mbqspat.pipeline import build_subset
from mbqspat.sim import (
    basis_state,
    branch_states,
    circuit_unitary,
    determinism_check,
    fidelity,
    random_state,
    run_pattern,
    validate_pattern_vs_circuit,
)
from mbqspat.transpile import TranspileError, circuit_to_pattern, fragment_pattern, gate_to_fragment

GATES = [
    Gate("H", (0,)),
    Gate("S", (0,)),
    Gate("X", (0,)),
    Gate("Y", (0,)),
    Gate("Z", (0,)),
    Gate("RZ", (0,), AngleExpr(const=0.83)),
    Gate("CNOT", (0, 1)),
    Gate("CNOT", (1, 0)),
    Gate("SWAP", (0, 1)),
]


@pytest.mark.parametrize("gate", GATES, ids=str)
def test_fragment_matches_gate_on_every_branch(gate, rng):
    width = 2 if gate.kind in ("CNOT", "SWAP") else 1
    ends = {q: q for q in range(width)}
    frag = gate_to_fragment(gate, ends)
    p = fragment_pattern(frag, ends, range(width))
    u = circuit_unitary(Circuit(width, (gate,)))
    inputs = [basis_state(b) for b in np.ndindex(*(2,) * width)] + [random_state(width, rng)]
    for psi in inputs:
        for _, out in branch_states(p, psi):
            assert fidelity(out, u @ psi) > 1 - 1e-10


def test_h_fragment_shape():
    frag = gate_to_fragment(h(0), {0: 0})
    assert frag.commands == (N(1), E((0, 1)), M(0), X(1, (0,)))
    assert frag.consumed == (0,) and frag.created == (1,) and frag.wire_ends == {0: 1}


def test_cnot_adds_two_nodes_three_edges():
    frag = gate_to_fragment(cnot(0, 1), {0: 0, 1: 1})
    assert len(frag.created) == 2 and frag.n_edges == 3


def test_rz_zero_is_identity(rng):
    p = circuit_to_pattern(Circuit(1, (rz(0.0, 0),)))
    psi = random_state(1, rng)
    assert fidelity(run_pattern(p, psi), psi) > 1 - 1e-10


def test_missing_wire_end():
    with pytest.raises(TranspileError):
        gate_to_fragment(cnot(0, 1), {0: 0})


def test_empty_circuit():
    p = circuit_to_pattern(Circuit(6))
    assert p.commands == () and p.input_nodes == p.output_nodes == tuple(range(6))


def test_hh_is_identity(rng):
    p = circuit_to_pattern(Circuit(1, (h(0), h(0))))
    for _ in range(5):
        psi = random_state(1, rng)
        assert fidelity(run_pattern(p, psi), psi) > 1 - 1e-10


def test_subset32_circuit_pattern():
    c = synth_string_exponential(parse_pauli("IXYYXI"), 32)
    p = circuit_to_pattern(c)
    assert 30 <= graph_of(p).n <= 60
    rep = validate_pattern_vs_circuit(p, c, trials=5, binding={32: 0.011922474})
    assert rep.passed
    psi = random_state(6, 7)
    want = pauli_exponential(parse_pauli("IXYYXI"), 0.011922474) @ psi
    assert fidelity(run_pattern(p, psi, binding={32: 0.011922474}), want) > 1 - 1e-10


def test_generated_patterns_have_flow(be2_ham):
    part = group(be2_ham, "smallest-last")
    for ell in range(part.n_ss):
        art = build_subset(be2_ham, part, ell)
        g = graph_of(art.pattern)
        fl = find_causal_flow(g)
        assert fl is not None and check_causal_flow(g, fl) == []


def test_be2_oo_degree_and_determinism(be2_ham):
    part = group(be2_ham, "one-to-one")
    for ell in range(part.n_ss):
        art = build_subset(be2_ham, part, ell)
        assert art.metrics.m_d <= 4
        if ell % 10 == 0:
            assert determinism_check(art.pattern, trials=3, seed=ell)
