import itertools

import pytest

from mbqspat.circuit import Circuit, cnot, h, rz
from mbqspat.flow import (
    FlowLayering,
    check_causal_flow,
    compute_metrics,
    dependency_layering,
    find_causal_flow,
    pauli_counts,
)
from mbqspat.grouping import group
from mbqspat.pattern import OpenGraph, Pattern, five_node_identity, graph_of
from mbqspat.pipeline import build_subset
from mbqspat.transpile import circuit_to_pattern


def test_chain_flow():
    g = graph_of(five_node_identity())
    fl = find_causal_flow(g)
    assert fl.successor == {0: 1, 1: 2, 2: 3, 3: 4}
    assert fl.layer == {4: 0, 3: 1, 2: 2, 1: 3, 0: 4}
    assert fl.n_l == 5 and fl.nodes_in_layer(2) == [2]
    assert check_causal_flow(g, fl) == []


def test_no_flow_cases():
    # an isolated internal node has no successor
    g = OpenGraph.from_edges([(0, 1)], inputs=(0,), outputs=(1,), nodes=(0, 1, 2))
    assert find_causal_flow(g) is None
    # two inputs feeding one output
    g = OpenGraph.from_edges([(0, 2), (1, 2)], inputs=(0, 1), outputs=(2,))
    assert find_causal_flow(g) is None


def test_checker_rejects_bad_flows():
    g = graph_of(five_node_identity())
    bad = FlowLayering({0: 1, 1: 2, 2: 3, 3: 4}, {4: 0, 3: 1, 2: 2, 1: 2, 0: 4})
    assert check_causal_flow(g, bad)
    not_neighbour = FlowLayering({0: 2, 1: 2, 2: 3, 3: 4}, {4: 0, 3: 1, 2: 2, 1: 3, 0: 4})
    assert check_causal_flow(g, not_neighbour)


def _brute_force_min_layers(g: OpenGraph) -> int | None:
    """Fewest layers over all causal flows, by enumerating successor maps."""
    measured = [v for v in g.nodes if v not in g.outputs]
    choices = [sorted(g.neighbors(v) - set(g.inputs)) for v in measured]
    best = None
    for pick in itertools.product(*choices):
        if len(set(pick)) != len(pick):
            continue
        f = dict(zip(measured, pick))
        # i must precede f(i) and every other neighbour of f(i)
        after = {v: {f[v]} | (g.neighbors(f[v]) - {v}) for v in measured}
        layer = {v: 0 for v in g.outputs}
        ok = True
        for _ in range(len(g.nodes) + 1):
            changed = False
            for v in measured:
                lv = 1 + max((layer.get(w, -10**6) for w in after[v]), default=0)
                if any(w not in layer for w in after[v]):
                    continue
                if layer.get(v) != lv:
                    layer[v] = lv
                    changed = True
            if not changed:
                break
        if len(layer) != len(g.nodes) or any(layer[v] > len(g.nodes) for v in layer):
            ok = False
        if ok:
            n_l = len(set(layer.values()))
            best = n_l if best is None else min(best, n_l)
    return best


def test_flow_is_maximally_delayed_on_small_graphs(rng):
    checked = 0
    for _ in range(60):
        n = int(rng.integers(3, 7))
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45]
        k = int(rng.integers(1, 3))
        g = OpenGraph.from_edges(edges, inputs=tuple(range(k)), outputs=tuple(range(n - k, n)), nodes=range(n))
        fl = find_causal_flow(g)
        want = _brute_force_min_layers(g)
        if want is None:
            assert fl is None
            continue
        assert fl is not None and check_causal_flow(g, fl) == []
        assert fl.n_l == want
        checked += 1
    assert checked > 5


def test_fixture_layers(subset32, subset32_pattern):
    fl = find_causal_flow(graph_of(subset32_pattern))
    want = {int(k): v for k, v in subset32["meta"]["node_layer_list_causal_flow"].items()}
    assert fl.layer == want
    assert check_causal_flow(graph_of(subset32_pattern), fl) == []


def test_chain_metrics():
    m = compute_metrics(five_node_identity())
    assert (m.n, m.n_e, m.m_d, m.n_P, m.m_w, m.n_l, m.m_ld) == (5, 4, 2, 4, 1, 5, 1)


def test_fixture_metrics(subset32_pattern):
    m = compute_metrics(subset32_pattern)
    assert (m.n, m.m_d, m.n_px, m.n_py, m.n_l, m.m_ld) == (44, 4, 29, 8, 21, 14)
    assert m.n_e == 44
    assert m.m_w == 6
    assert m.n_non_pauli == 1


def test_single_node_metrics():
    m = compute_metrics(Pattern((0,), (0,), ()))
    assert (m.n, m.n_e, m.m_d, m.n_P, m.n_l, m.m_ld) == (1, 0, 0, 0, 1, 0)
    assert m.m_w == 1  # outputs count toward layer width


def test_pauli_counts_symbolic_angles_are_non_pauli(subset32_pattern):
    assert pauli_counts(subset32_pattern) == (29, 8)


def test_dependency_layering_on_flow_pattern():
    layer = dependency_layering(five_node_identity())
    assert layer[4] == 0
    assert all(layer[v] >= 1 for v in range(4))


@pytest.mark.parametrize("width", [1, 2, 3])
def test_width_equals_wires(width, rng):
    gates = [h(q) for q in range(width)] + [rz(0.3, q) for q in range(width)]
    gates += [cnot(q, q + 1) for q in range(width - 1)]
    p = circuit_to_pattern(Circuit(width, tuple(gates)))
    assert compute_metrics(p).m_w == width


def test_max_layers_bounds_edge_span(be2_ham):
    part = group(be2_ham, "smallest-last")
    ms = [build_subset(be2_ham, part, ell).metrics for ell in range(part.n_ss)]
    assert max(m.n_l for m in ms) >= max(m.m_ld for m in ms)
    assert all(m.m_w == be2_ham.n_q for m in ms)
