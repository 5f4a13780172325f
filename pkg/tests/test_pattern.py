import numpy as np
import pytest

from helpers import j_chain, same_branch_states
from mbqspat.circuit import Circuit, cnot, h, rz
from mbqspat.pattern import (
    E,
    M,
    N,
    OpenGraph,
    Pattern,
    PatternError,
    X,
    concat,
    concat_all,
    five_node_identity,
    graph_of,
    identity_pattern,
    shift_signals,
    standardize,
    xor_domain,
)
from mbqspat.sim import branch_states, fidelity, random_state, rz_matrix, run_pattern
from mbqspat.transpile import circuit_to_pattern

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_xor_domain_cancels_and_keeps_order():
    assert xor_domain((3, 1), (1, 5)) == (3, 5)
    assert xor_domain((2,), (2,)) == ()
    assert xor_domain((1,), (2,), (1,)) == (2,)


def test_p5i_is_standard_fixpoint():
    p = five_node_identity()
    assert p.is_standard() and p.is_shifted()
    assert standardize(p) == p
    assert shift_signals(p) == p


def test_correction_folds_into_measurement():
    p = Pattern((0,), (1,), (N(1), E((0, 1)), X(0, ()), M(0), X(1, (0,))))
    q = Pattern((0, 1), (1,), (X(0, ()), M(0), X(1, (0,))))
    assert standardize(q).commands[0] == M(0)
    r = Pattern((0, 2), (1,), (N(1), E((0, 1)), M(2), X(0, (2,)), M(0, "XY", 0.4), X(1, (0,))))
    m0 = standardize(r).measurement_of(0)
    assert m0.s_domain == (2,)
    assert standardize(p).is_standard()


def test_one_node_step_matches_oracle(rng):
    a = 0.7
    p = j_chain([a])
    psi = random_state(1, rng)
    for _, out in branch_states(p, psi):
        assert fidelity(out, H @ rz_matrix(-a) @ psi) > 1 - 1e-10


def test_interleaved_composition_standardizes(rng):
    angles = [0.3, -1.1, 0.5]
    p = j_chain(angles)
    assert not p.is_standard()
    q = standardize(p)
    assert q.is_standard()
    assert q.measurement_of(2).t_domain == (0,)
    psi = random_state(1, rng)
    assert same_branch_states(p, q, psi)
    want = psi
    for a in angles:
        want = H @ rz_matrix(-a) @ want
    for _, out in branch_states(q, psi):
        assert fidelity(out, want) > 1 - 1e-10


def test_shift_signals_removes_t_domains(rng):
    q = standardize(j_chain([0.3, -1.1, 0.5, 0.9]))
    assert not q.is_shifted()
    r = shift_signals(q)
    assert r.is_shifted() and r.is_standard()
    assert same_branch_states(q, r, random_state(1, rng))


def test_shift_signals_non_deterministic_pattern(rng):
    # no corrections at all: branches differ, but the multiset is preserved
    p = Pattern((0,), (2,), (N(1), N(2), E((0, 1)), E((1, 2)), M(0, "XY", 0.2), M(1, "XY", 0.9, (), (0,))))
    r = shift_signals(p)
    assert r.measurement_of(1).t_domain == ()
    assert same_branch_states(p, r, random_state(1, rng))


def test_concat_two_teleports_is_nine_node_chain(rng):
    p = concat(five_node_identity(), five_node_identity())
    g = graph_of(p)
    assert g.n == 9 and g.n_e == 8 and g.max_degree() == 2
    for _ in range(10):
        psi = random_state(1, rng)
        assert fidelity(run_pattern(p, psi), psi) > 1 - 1e-10


def test_concat_with_empty_pattern():
    p = five_node_identity()
    assert concat(p, identity_pattern(1)).canonical() == p.canonical()
    with pytest.raises(PatternError):
        concat(p, identity_pattern(2))
    with pytest.raises(PatternError):
        concat_all([])


def _random_two_qubit_circuit(rng, k=4):
    gates = []
    for _ in range(k):
        r = rng.integers(3)
        if r == 0:
            gates.append(h(int(rng.integers(2))))
        elif r == 1:
            gates.append(rz(float(rng.normal()), int(rng.integers(2))))
        else:
            a = int(rng.integers(2))
            gates.append(cnot(a, 1 - a))
    return Circuit(2, tuple(gates))


def test_concat_associative(rng):
    for _ in range(3):
        a, b, c = (circuit_to_pattern(_random_two_qubit_circuit(rng)) for _ in range(3))
        left = concat(concat(a, b), c)
        right = concat(a, concat(b, c))
        assert left.canonical() == right.canonical()
        psi = random_state(2, rng)
        assert fidelity(run_pattern(left, psi), run_pattern(right, psi)) > 1 - 1e-10


def test_graph_of():
    g = graph_of(five_node_identity())
    assert sorted(tuple(sorted(e)) for e in g.edges) == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert g.inputs == (0,) and g.outputs == (4,)
    empty = graph_of(Pattern((), (), ()))
    assert empty.n == 0 and empty.n_e == 0
    assert OpenGraph.from_edges([(0, 1), (1, 2)]).to_networkx().number_of_edges() == 2


def test_repeated_edge_cancels():
    p = Pattern((0, 1), (0, 1), (E((0, 1)), E((1, 0))))
    assert p.edge_list() == []


@pytest.mark.parametrize(
    "cmds, inputs, outputs",
    [
        ((N(1), M(1)), (0,), (1,)),  # output measured
        ((M(0), M(0)), (0,), ()),  # measured twice
        ((N(1),), (0,), (1,)),  # input left unmeasured
        ((E((0, 5)), M(0)), (0,), ()),  # undeclared node
        ((N(1), M(0, "XY", 0.0, (1,)), M(1)), (0,), ()),  # domain cites a later measurement
        ((N(0),), (0,), (0,)),  # input re-prepared
    ],
)
def test_ill_formed_patterns_raise(cmds, inputs, outputs):
    with pytest.raises(PatternError):
        Pattern(inputs, outputs, cmds)


def test_command_validation():
    with pytest.raises(PatternError):
        E((1, 1))
    with pytest.raises(PatternError):
        M(0, "XX")
